#pragma once

// Quadrant partition function machinery: exact enumeration over the finite
// six-vertex window, the determinant closed form, the Schur-measure
// expansion, and the corner-height expectations tying the three together.
// The enumerator is deliberately independent of the lattice sampler code
// path so it can serve as an oracle for it.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpng/lattice.hpp"
#include "tpng/linalg.hpp"
#include "tpng/qmath.hpp"
#include "tpng/rational.hpp"
#include "tpng/rng.hpp"
#include "tpng/symfun.hpp"

namespace tpng {

template <NumericScalar S>
struct HybridParams {
  std::vector<S> x, y;
  long k = 0;
  S t = scalar_from_int<S>(0);
};

template <NumericScalar S>
void validate_hybrid(const HybridParams<S>& p) {
  if (p.x.empty() || p.x.size() != p.y.size())
    throw std::invalid_argument("HybridParams: need matching nonempty alphabets");
  if (p.k < 0) throw std::invalid_argument("HybridParams: k must be >= 0");
}

template <NumericScalar S>
nlohmann::json hybrid_params_json(const HybridParams<S>& p) {
  nlohmann::json jx = nlohmann::json::array(), jy = nlohmann::json::array();
  for (const S& v : p.x) jx.push_back(scalar_to_double(v));
  for (const S& v : p.y) jy.push_back(scalar_to_double(v));
  return {{"x", std::move(jx)}, {"y", std::move(jy)}, {"k", p.k}, {"t", scalar_to_double(p.t)}};
}

// (t^{k+1};t)_inf / (t^{k+1+m};t)_inf collapsed to its finite form.
template <NumericScalar S>
S tower_factor(const S& t, long k, long m) {
  S acc = scalar_from_int<S>(1);
  for (long b = 1; b <= m; ++b) acc *= scalar_from_int<S>(1) - scalar_pow(t, k + b);
  return acc;
}

// Continuation of the tower along t^{k+1} = -zeta.
template <NumericScalar S>
S zeta_tower(const S& zeta, const S& t, long m) {
  S acc = scalar_from_int<S>(1);
  for (long j = 0; j < m; ++j) acc *= scalar_from_int<S>(1) + zeta * scalar_pow(t, j);
  return acc;
}

namespace detail {

// One crossing with column rapidity over row rapidity z; algebraic, so the
// caller decides whether a probabilistic regime is required.
template <NumericScalar S>
S rvertex_weight(const S& z, const S& t, int i1, int j1, int i2, int j2) {
  const S one = scalar_from_int<S>(1);
  if (i1 + j1 != i2 + j2) return scalar_from_int<S>(0);
  if (i1 == j1) return one;
  const S den = one - t * z;
  if (scalar_is_zero(den)) throw std::domain_error("rvertex_weight: pole at t*z = 1");
  if (i1 == 1) return i2 == 1 ? t * (one - z) / den : (one - t) / den;
  return i2 == 0 ? (one - z) / den : (one - t) * z / den;
}

// Sweeps the window column by column; the state is the occupancy mask of the
// horizontal edges on the cut east of the processed columns (bit b-1 = row b)
// with the intra-column vertical state carried in the top bit. West boundary
// saturated, south boundary empty, north exits summed out. Entry m of the
// result is the total weight of configurations leaving mask m on the east
// boundary, so its popcount is the corner height.
template <NumericScalar S>
std::vector<S> quadrant_exit_weights(const std::vector<S>& x, const std::vector<S>& y, const S& t) {
  const long rows = static_cast<long>(x.size()), cols = static_cast<long>(y.size());
  if (rows < 1 || cols < 1) throw std::invalid_argument("quadrant enumeration: empty window");
  if (rows > 6 || cols > 6)
    throw std::length_error("quadrant enumeration: more than 6 lines per side");
  const std::size_t M = std::size_t{1} << rows;
  const S zero = scalar_from_int<S>(0);
  std::vector<S> dp(M, zero);
  dp[M - 1] = scalar_from_int<S>(1);
  std::vector<S> cur(2 * M, zero), next(2 * M, zero);
  for (long a = 0; a < cols; ++a) {
    std::fill(cur.begin(), cur.end(), zero);
    for (std::size_t m = 0; m < M; ++m) cur[m] = dp[m];  // vertical state 0 below row 1
    for (long b = 0; b < rows; ++b) {
      const S z = x[b] * y[a];
      std::fill(next.begin(), next.end(), zero);
      for (std::size_t idx = 0; idx < 2 * M; ++idx) {
        if (scalar_is_zero(cur[idx])) continue;
        const int i1 = static_cast<int>(idx >> rows);
        const int j1 = static_cast<int>((idx >> b) & 1);
        for (int i2 = 0; i2 <= 1; ++i2) {
          const int j2 = i1 + j1 - i2;
          if (j2 < 0 || j2 > 1) continue;
          const S w = rvertex_weight(z, t, i1, j1, i2, j2);
          if (scalar_is_zero(w)) continue;
          const std::size_t mask = (idx & (M - 1) & ~(std::size_t{1} << b)) |
                                   (static_cast<std::size_t>(j2) << b);
          next[mask | (static_cast<std::size_t>(i2) << rows)] += cur[idx] * w;
        }
      }
      cur.swap(next);
    }
    for (std::size_t m = 0; m < M; ++m) dp[m] = cur[m] + cur[m | M];
  }
  return dp;
}

template <NumericScalar S>
std::vector<S> exit_pmf(const std::vector<S>& mask_weights, long rows) {
  std::vector<S> pmf(rows + 1, scalar_from_int<S>(0));
  for (std::size_t m = 0; m < mask_weights.size(); ++m)
    pmf[std::popcount(m)] += mask_weights[m];
  return pmf;
}

}  // namespace detail

// Exact law of the corner height (east exit count) of the step-boundary
// window; requires the stochastic regime so the weights form probabilities.
template <NumericScalar S>
std::vector<S> quadrant_height_pmf(const std::vector<S>& x, const std::vector<S>& y, const S& t) {
  const S zero = scalar_from_int<S>(0), one = scalar_from_int<S>(1);
  if (t < zero || !(t < one)) throw std::domain_error("quadrant_height_pmf: t outside [0,1)");
  for (const S& xb : x)
    for (const S& ya : y) {
      const S z = xb * ya;
      if (z < zero || one < z)
        throw std::domain_error("quadrant_height_pmf: rapidity product outside [0,1]");
    }
  return detail::exit_pmf(detail::quadrant_exit_weights(x, y, t),
                          static_cast<long>(x.size()));
}

template <NumericScalar S>
S z_bruteforce(const HybridParams<S>& p) {
  validate_hybrid(p);
  const auto pmf = detail::exit_pmf(detail::quadrant_exit_weights(p.x, p.y, p.t),
                                    static_cast<long>(p.x.size()));
  S acc = scalar_from_int<S>(0);
  for (long m = 0; m < static_cast<long>(pmf.size()); ++m)
    acc += pmf[m] * tower_factor(p.t, p.k, m);
  for (const S& ya : p.y) acc *= ya;
  return acc;
}

template <NumericScalar S>
S z_determinant(const HybridParams<S>& p) {
  validate_hybrid(p);
  const long N = static_cast<long>(p.x.size());
  const S one = scalar_from_int<S>(1);
  for (long i = 0; i < N; ++i)
    for (long j = i + 1; j < N; ++j)
      if (p.x[i] == p.x[j] || p.y[i] == p.y[j])
        throw std::domain_error(
            "z_determinant: coincident rapidities hit a removable singularity, perturb the inputs");
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) {
      if (scalar_is_zero(one - p.x[i] * p.y[j]) || scalar_is_zero(one - p.t * p.x[i] * p.y[j]))
        throw std::domain_error("z_determinant: pole at x*y in {1, 1/t}");
    }
  const S tk = scalar_pow(p.t, p.k), tk1 = tk * p.t;
  Matrix<S> m(N, std::vector<S>(N));
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) {
      const S xy = p.x[i] * p.y[j];
      m[i][j] = (one - tk1 - p.t * (one - tk) * xy) / ((one - xy) * (one - p.t * xy));
    }
  S pref = scalar_from_int<S>(1);
  for (long i = 0; i < N; ++i) pref *= p.y[i];
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) pref *= one - p.x[i] * p.y[j];
  for (long i = 0; i < N; ++i)
    for (long j = i + 1; j < N; ++j) pref /= (p.x[i] - p.x[j]) * (p.y[i] - p.y[j]);
  return pref * matrix_det(std::move(m));
}

template <NumericScalar S>
struct TailValue {
  S value;
  double tail = 0;  // certified bound on the dropped partition mass
};

namespace detail {

// E_SM over the Schur measure of the two alphabets, restricted to the box
// l(lambda) <= min width, lambda_1 <= cutoff. The observable must obey
// 0 <= obs <= obs_bound on the whole box for the tail bound to certify.
template <NumericScalar S, class Obs>
TailValue<S> schur_box_expectation(const std::vector<S>& x, const std::vector<S>& y, long cutoff,
                                   Obs&& obs, double obs_bound) {
  const S zero = scalar_from_int<S>(0), one = scalar_from_int<S>(1);
  if (x.empty() || y.empty()) throw std::invalid_argument("schur expansion: empty alphabet");
  if (cutoff < 0) throw std::invalid_argument("schur expansion: negative cutoff");
  for (const S& v : x)
    if (v < zero) throw std::domain_error("schur expansion: needs nonnegative alphabets");
  for (const S& v : y)
    if (v < zero) throw std::domain_error("schur expansion: needs nonnegative alphabets");
  S pref = one;
  for (const S& xi : x)
    for (const S& yj : y) {
      if (!(xi * yj < one)) throw std::domain_error("schur expansion: divergent, need x*y < 1");
      pref *= one - xi * yj;
    }
  const long lmax = static_cast<long>(std::min(x.size(), y.size()));
  BasicSpecialization<S> rx, ry;
  rx.alpha = x;
  ry.alpha = y;
  const auto hx = h_coeffs(rx, cutoff + lmax);
  const auto hy = h_coeffs(ry, cutoff + lmax);
  StableSum<S> mass, val;
  Partition la;
  auto rec = [&](auto&& self, long maxp) -> void {
    const S p = pref * jacobi_trudi_det(la, hx) * jacobi_trudi_det(la, hy);
    mass.add(p);
    val.add(p * obs(la));
    if (la.length() == lmax) return;
    for (long q = 1; q <= maxp; ++q) {
      la.parts.push_back(q);
      self(self, q);
      la.parts.pop_back();
    }
  };
  rec(rec, cutoff);
  const double missing = std::max(0.0, 1 - scalar_to_double(mass.value()));
  return {val.value(), missing * obs_bound + 1e-15};
}

}  // namespace detail

template <NumericScalar S>
TailValue<S> z_schur_expansion(const HybridParams<S>& p, long cutoff) {
  validate_hybrid(p);
  const long N = static_cast<long>(p.x.size());
  const S one = scalar_from_int<S>(1);
  auto obs = [&](const Partition& la) {
    S acc = one;
    for (long i = 1; i <= N; ++i) {
      const long part = i <= la.length() ? la.parts[i - 1] : 0;
      acc *= one - scalar_pow(p.t, p.k + 1 + part - i + N);
    }
    return acc;
  };
  auto e = detail::schur_box_expectation(p.x, p.y, cutoff, obs, 1.0);
  double ymag = 1;
  for (const S& ya : p.y) {
    e.value *= ya;
    ymag *= std::abs(scalar_to_double(ya));
  }
  e.tail *= ymag;
  return e;
}

// Schur side of the analytically continued match: E_SM over the x/y measure
// of prod_i (1 + zeta t^{lambda_i - i + Nx}), with Nx the x alphabet size.
// Rectangular alphabets implement the trailing-zero reduction.
template <NumericScalar S>
TailValue<S> z_schur_zeta(const std::vector<S>& x, const std::vector<S>& y, const S& zeta,
                          const S& t, long cutoff) {
  const S one = scalar_from_int<S>(1);
  if (zeta < scalar_from_int<S>(0)) throw std::domain_error("z_schur_zeta: negative zeta");
  const long N = static_cast<long>(x.size());
  auto obs = [&](const Partition& la) {
    S acc = one;
    for (long i = 1; i <= N; ++i) {
      const long part = i <= la.length() ? la.parts[i - 1] : 0;
      acc *= one + zeta * scalar_pow(t, part - i + N);
    }
    return acc;
  };
  return detail::schur_box_expectation(x, y, cutoff, obs,
                                       scalar_to_double(zeta_tower(zeta, t, N)));
}

// E_6v[(t^{k+1};t)_inf / (t^{k+1+h};t)_inf] over the step-boundary window.
template <NumericScalar S>
S sixv_expectation_exact(const HybridParams<S>& p) {
  validate_hybrid(p);
  const auto pmf = quadrant_height_pmf(p.x, p.y, p.t);
  S acc = scalar_from_int<S>(0);
  for (long m = 0; m < static_cast<long>(pmf.size()); ++m)
    acc += pmf[m] * tower_factor(p.t, p.k, m);
  return acc;
}

// Continued form E_6v[prod_{j<h} (1 + zeta t^j)], exact; rectangles allowed.
template <NumericScalar S>
S sixv_zeta_expectation(const std::vector<S>& x, const std::vector<S>& y, const S& t,
                        const S& zeta) {
  if (zeta < scalar_from_int<S>(0)) throw std::domain_error("sixv_zeta_expectation: negative zeta");
  const auto pmf = quadrant_height_pmf(x, y, t);
  S acc = scalar_from_int<S>(0);
  for (long m = 0; m < static_cast<long>(pmf.size()); ++m)
    acc += pmf[m] * zeta_tower(zeta, t, m);
  return acc;
}

enum class SixvMode { exact_enumeration, mc };

// Float front end: exact law for windows within the enumeration guard,
// lattice-sampler Monte Carlo otherwise (budget = replica count).
inline ObservableValue sixv_expectation(const HybridParams<double>& p, SixvMode mode, long budget,
                                        std::uint64_t seed = 0) {
  validate_hybrid(p);
  if (mode == SixvMode::exact_enumeration)
    return {sixv_expectation_exact(p), 1e-12};
  if (budget < 2) throw std::invalid_argument("sixv_expectation: mc mode needs >= 2 replicas");
  std::vector<double> xs_recip;
  for (double xb : p.x) xs_recip.push_back(1.0 / xb);
  double mean = 0, m2 = 0;
  for (long i = 0; i < budget; ++i) {
    const auto [ens, h] =
        sample_sixvertex(xs_recip, p.y, p.t, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const double v = tower_factor(p.t, p.k, h);
    const double d = v - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v - mean);
  }
  const double se = std::sqrt(m2 / static_cast<double>(budget - 1) / static_cast<double>(budget));
  return {mean, se};
}

}  // namespace tpng
