#pragma once

// Partitions, (alpha|beta|gamma) specializations in the q=t Schur case,
// Jacobi-Trudi evaluation, Poissonized-Plancherel sampling through RSK, and
// the Schur-side observables of the height-matching identity, including the
// reconstruction of a height law from tabulated observable values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpng/linalg.hpp"
#include "tpng/patience.hpp"
#include "tpng/qmath.hpp"
#include "tpng/rational.hpp"
#include "tpng/rng.hpp"

namespace tpng {

struct Partition {
  std::vector<long> parts;  // weakly decreasing, all >= 1

  long length() const { return static_cast<long>(parts.size()); }
  long size() const {
    long n = 0;
    for (long p : parts) n += p;
    return n;
  }
};

inline bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }
inline bool operator<(const Partition& a, const Partition& b) { return a.parts < b.parts; }

inline void validate_partition(const Partition& la) {
  for (std::size_t i = 0; i < la.parts.size(); ++i) {
    if (la.parts[i] < 1) throw std::invalid_argument("validate_partition: parts must be positive");
    if (i > 0 && la.parts[i] > la.parts[i - 1])
      throw std::invalid_argument("validate_partition: parts must be weakly decreasing");
  }
}

inline nlohmann::json partition_json(const Partition& la) {
  nlohmann::json arr = nlohmann::json::array();
  for (long p : la.parts) arr.push_back(p);
  return arr;
}

template <NumericScalar S>
struct BasicSpecialization {
  std::vector<S> alpha, beta;
  S gamma = scalar_from_int<S>(0);
};
using Specialization = BasicSpecialization<double>;

template <NumericScalar S>
void validate_specialization(const BasicSpecialization<S>& rho) {
  const S zero = scalar_from_int<S>(0);
  for (const S& a : rho.alpha)
    if (a < zero) throw std::invalid_argument("validate_specialization: negative alpha part");
  for (const S& b : rho.beta)
    if (b < zero) throw std::invalid_argument("validate_specialization: negative beta part");
  if (rho.gamma < zero) throw std::invalid_argument("validate_specialization: negative gamma");
}

// Coefficients of z^k, k <= kmax, of e^{gamma z} prod_j (1+beta_j z)/(1-alpha_j z).
template <NumericScalar S>
std::vector<S> h_coeffs(const BasicSpecialization<S>& rho, long kmax) {
  if (kmax < 0) throw std::invalid_argument("h_coeffs: negative kmax");
  validate_specialization(rho);
  std::vector<S> h(kmax + 1, scalar_from_int<S>(0));
  h[0] = scalar_from_int<S>(1);
  if (!scalar_is_zero(rho.gamma)) {
    S term = scalar_from_int<S>(1);
    for (long k = 1; k <= kmax; ++k) {
      term *= rho.gamma / scalar_from_int<S>(k);
      h[k] = term;
    }
  }
  for (const S& b : rho.beta)
    for (long k = kmax; k >= 1; --k) h[k] += b * h[k - 1];
  // prefix recurrence divides by (1 - alpha z)
  for (const S& a : rho.alpha)
    for (long k = 1; k <= kmax; ++k) h[k] += a * h[k - 1];
  return h;
}

// det[h_{lambda_i - i + j}] over a precomputed h table; negative index -> 0.
template <NumericScalar S>
S jacobi_trudi_det(const Partition& la, const std::vector<S>& h) {
  validate_partition(la);
  const long l = la.length();
  if (l == 0) return scalar_from_int<S>(1);
  Matrix<S> m(l, std::vector<S>(l, scalar_from_int<S>(0)));
  for (long i = 1; i <= l; ++i)
    for (long j = 1; j <= l; ++j) {
      const long idx = la.parts[i - 1] - i + j;
      if (idx < 0) continue;
      if (idx >= static_cast<long>(h.size()))
        throw std::invalid_argument("jacobi_trudi_det: h table too short");
      m[i - 1][j - 1] = h[idx];
    }
  return matrix_det(std::move(m));
}

template <NumericScalar S>
S schur_eval(const Partition& la, const BasicSpecialization<S>& rho) {
  const long need = la.parts.empty() ? 0 : la.parts[0] + la.length();
  return jacobi_trudi_det(la, h_coeffs(rho, need));
}

// p_k of the specialization; gamma contributes at k = 1 only.
template <NumericScalar S>
S power_sum(const BasicSpecialization<S>& rho, long k) {
  if (k < 1) throw std::invalid_argument("power_sum: k must be positive");
  S acc = (k == 1) ? rho.gamma : scalar_from_int<S>(0);
  for (const S& a : rho.alpha) acc += scalar_pow(a, k);
  for (const S& b : rho.beta) {
    const S bk = scalar_pow(b, k);
    if (k % 2 == 1) acc += bk; else acc -= bk;
  }
  return acc;
}

// exp(sum_k p_k(rho1) p_k(rho2) / k); the terms must decay geometrically.
inline long double cauchy_normalizer(const BasicSpecialization<long double>& rho1,
                                     const BasicSpecialization<long double>& rho2) {
  long double s = 0;
  for (long k = 1; k <= 4000; ++k) {
    const long double term = power_sum(rho1, k) * power_sum(rho2, k) / static_cast<long double>(k);
    s += term;
    if (k >= 4 && std::abs(term) < 1e-22L) return expl(s);
  }
  throw std::domain_error("cauchy_normalizer: power sums did not decay");
}

// All partitions of size <= budget: size ascending, larger first parts first.
template <class F>
void for_each_partition(long budget, F&& fn) {
  if (budget < 0) throw std::invalid_argument("for_each_partition: negative budget");
  Partition la;
  auto rec = [&](auto&& self, long rem, long maxp) -> void {
    if (rem == 0) {
      fn(static_cast<const Partition&>(la));
      return;
    }
    for (long p = std::min(rem, maxp); p >= 1; --p) {
      la.parts.push_back(p);
      self(self, rem - p, p);
      la.parts.pop_back();
    }
  };
  for (long n = 0; n <= budget; ++n) rec(rec, n, n);
}

// Common shape of the RSK insertion pair; the first row length is the LIS.
inline Partition rsk_shape(const Deck& deck) {
  validate_deck(deck);
  std::vector<std::vector<long>> rows;
  for (long card : deck.cards) {
    long x = card;
    bool placed = false;
    for (auto& row : rows) {
      auto it = std::upper_bound(row.begin(), row.end(), x);
      if (it == row.end()) {
        row.push_back(x);
        placed = true;
        break;
      }
      std::swap(*it, x);
    }
    if (!placed) rows.push_back({x});
  }
  Partition la;
  for (const auto& row : rows) la.parts.push_back(static_cast<long>(row.size()));
  return la;
}

inline Partition plancherel_sample(double xi, std::uint64_t seed) {
  if (!(xi >= 0) || !std::isfinite(xi)) throw std::invalid_argument("plancherel_sample: bad intensity");
  RngStream rng(seed, 0);
  const long n = rng.poisson(xi);
  return rsk_shape(shuffled_deck(n, rng));
}

// Schur-side integrand of the matching identity,
//   f(lambda) = prod_j (1 + zeta t^{lambda_j - j}) / (-t^{-l} zeta; t)_inf.
// The l leading denominator factors pair against the numerator ones, so every
// partial ratio sits in (0,1] for zeta >= 0; the leftover is 1/(-zeta;t)_inf,
// which also bounds f uniformly over partitions.
inline long double observable_factor(const Partition& la, long double zeta, long double t) {
  if (!(zeta >= 0)) throw std::domain_error("observable_factor: negative zeta");
  if (zeta == 0) return 1;
  if (t == 0) return la.parts.empty() ? 1 / (1 + zeta) : 0;
  long double acc = 1;
  const long l = la.length();
  for (long j = 1; j <= l; ++j) {
    const long double num = 1 + zeta * powl(t, static_cast<long double>(la.parts[j - 1] - j));
    const long double den = 1 + zeta * powl(t, static_cast<long double>(-j));
    acc *= num / den;
  }
  return acc / qpochhammer(-zeta, t, inf);
}

// Height-side integrand 1/(-zeta t^{-h}; t)_inf.
inline long double height_observable(long h, long double zeta, long double t) {
  if (h < 0) throw std::domain_error("height_observable: negative height");
  if (!(zeta >= 0)) throw std::domain_error("height_observable: negative zeta");
  if (zeta == 0) return 1;
  if (t == 0) return h == 0 ? 1 / (1 + zeta) : 0;
  long double acc = 1;
  for (long m = 1; m <= h; ++m) acc *= 1 + zeta * powl(t, static_cast<long double>(-m));
  return 1 / (acc * qpochhammer(-zeta, t, inf));
}

enum class ObservableMode { truncated_exact, mc };

struct ObservableValue {
  double value = 0;
  double error_bound = 0;  // certified tail for truncated-exact, stderr for mc
};

namespace detail {

inline BasicSpecialization<long double> spec_to_ld(const Specialization& rho) {
  BasicSpecialization<long double> r;
  for (double a : rho.alpha) r.alpha.push_back(a);
  for (double b : rho.beta) r.beta.push_back(b);
  r.gamma = rho.gamma;
  return r;
}

// One pass over |lambda| <= budget accumulating the integrand at every node.
// Returns the per-node sums (already normalized) and the mass outside the cut.
struct SweepResult {
  std::vector<long double> values;
  long double missing = 0;
};

inline SweepResult observable_sweep(const Specialization& rho1, const Specialization& rho2,
                                    const std::vector<long double>& zetas, double t, long budget) {
  const auto r1 = spec_to_ld(rho1);
  const auto r2 = spec_to_ld(rho2);
  const auto h1 = h_coeffs(r1, 2 * budget);
  const auto h2 = h_coeffs(r2, 2 * budget);
  StableSum<long double> mass;
  std::vector<StableSum<long double>> vals(zetas.size());
  for_each_partition(budget, [&](const Partition& la) {
    const long double w = jacobi_trudi_det(la, h1) * jacobi_trudi_det(la, h2);
    mass.add(w);
    for (std::size_t i = 0; i < zetas.size(); ++i)
      vals[i].add(w * observable_factor(la, zetas[i], t));
  });
  const long double z = cauchy_normalizer(r1, r2);
  SweepResult out;
  for (auto& v : vals) out.values.push_back(v.value() / z);
  out.missing = std::max(0.0L, 1 - mass.value() / z);
  return out;
}

}  // namespace detail

// E_SM[(-t^{-l(lambda)} zeta; t)_inf^{-1} prod_j (1 + zeta t^{lambda_j - j})]
// over the Schur measure with the given specializations. budget caps the
// partition size in truncated-exact mode and counts replicas in mc mode.
inline ObservableValue schur_observable_rhs(const Specialization& rho1, const Specialization& rho2,
                                            double zeta, double t, ObservableMode mode, long budget,
                                            std::uint64_t seed = 0) {
  validate_specialization(rho1);
  validate_specialization(rho2);
  if (!(zeta >= 0) || !std::isfinite(zeta)) throw std::domain_error("schur_observable_rhs: bad zeta");
  if (!(t >= 0 && t < 1)) throw std::domain_error("schur_observable_rhs: t outside [0,1)");
  if (mode == ObservableMode::mc) {
    if (!rho1.alpha.empty() || !rho1.beta.empty() || !rho2.alpha.empty() || !rho2.beta.empty())
      throw std::invalid_argument("schur_observable_rhs: mc mode needs pure-gamma specializations");
    if (budget < 2) throw std::invalid_argument("schur_observable_rhs: mc mode needs >= 2 replicas");
    const double xi = rho1.gamma * rho2.gamma;
    double mean = 0, m2 = 0;
    for (long i = 0; i < budget; ++i) {
      const Partition la = plancherel_sample(xi, derive_seed(seed, static_cast<std::uint64_t>(i)));
      const double x = static_cast<double>(observable_factor(la, zeta, t));
      const double d = x - mean;
      mean += d / static_cast<double>(i + 1);
      m2 += d * (x - mean);
    }
    const double se = std::sqrt(m2 / static_cast<double>(budget - 1) / static_cast<double>(budget));
    return {mean, se};
  }
  if (budget < 0) throw std::invalid_argument("schur_observable_rhs: negative budget");
  const auto sweep = detail::observable_sweep(rho1, rho2, {static_cast<long double>(zeta)}, t, budget);
  const long double fmax = 1 / qpochhammer(static_cast<long double>(-zeta), static_cast<long double>(t), inf);
  return {static_cast<double>(sweep.values[0]),
          static_cast<double>(sweep.missing * fmax + 1e-13L)};
}

struct ObservableLaw {
  std::vector<double> pmf;  // indices 0..kmax
  double residual = 0;      // negative dust plus mass defect before cleanup
};

namespace detail {

inline ObservableLaw finalize_law(std::vector<double> p) {
  double neg = 0, sum = 0;
  for (double v : p) {
    if (v < 0) neg -= v;
    sum += v;
  }
  const double residual = neg + std::abs(sum - 1);
  if (!(residual <= 0.05))
    throw std::runtime_error("law reconstruction ill-conditioned, residual " + std::to_string(residual));
  double kept = 0;
  for (double& v : p) {
    if (v < 0) v = 0;
    kept += v;
  }
  for (double& v : p) v /= kept;
  return {std::move(p), residual};
}

}  // namespace detail

// Reconstructs the pmf of a height variable X supported on {0..kmax} from
// tabulated values of E[1/(-zeta t^{-X}; t)_inf] at kmax+1 or more distinct
// positive nodes. The collocation system in the height integrand is solved
// exactly over the embedded values; a geometric ladder zeta_i ~ t^{i-1/2}
// places one integrand transition per support point and keeps the solve well
// conditioned, whereas extracting moment coefficients from the same data
// would amplify node noise past any useful tolerance. Negative dust is
// clipped and reported through the residual.
inline ObservableLaw law_from_observable(const std::map<Rational, Rational>& values, double t, long kmax) {
  if (kmax < 0) throw std::invalid_argument("law_from_observable: negative kmax");
  if (!(t >= 0 && t < 1)) throw std::domain_error("law_from_observable: t outside [0,1)");
  if (static_cast<long>(values.size()) < kmax + 1)
    throw std::invalid_argument("law_from_observable: need at least kmax+1 nodes");
  Matrix<Rational> a;
  std::vector<Rational> b;
  for (const auto& [zeta, val] : values) {
    if (static_cast<long>(a.size()) == kmax + 1) break;
    if (!(zeta > Rational(0))) throw std::domain_error("law_from_observable: nodes must be positive");
    const long double z = zeta.to_long_double();
    std::vector<Rational> row;
    for (long h = 0; h <= kmax; ++h)
      row.push_back(Rational::from_long_double_exact(height_observable(h, z, t)));
    a.push_back(std::move(row));
    b.push_back(val);
  }
  const auto p = solve_linear(std::move(a), std::move(b));
  std::vector<double> pd;
  pd.reserve(p.size());
  for (const auto& v : p) pd.push_back(v.to_double());
  return detail::finalize_law(std::move(pd));
}

// Series entry: exact coefficients c_j of sum_j zeta^j E[t^{jX}] / (t;t)_j.
// The (t;t)_j rescale recovers the moments and the pmf solves a Vandermonde
// system in the nodes t^x, all in exact arithmetic.
inline ObservableLaw law_from_series(const std::vector<Rational>& coeffs, const Rational& t, long kmax) {
  if (kmax < 0) throw std::invalid_argument("law_from_series: negative kmax");
  if (static_cast<long>(coeffs.size()) < kmax + 1)
    throw std::invalid_argument("law_from_series: need at least kmax+1 coefficients");
  if (!(t >= Rational(0) && t < Rational(1))) throw std::domain_error("law_from_series: t outside [0,1)");
  Matrix<Rational> a(kmax + 1, std::vector<Rational>(kmax + 1));
  std::vector<Rational> mu(kmax + 1);
  for (long j = 0; j <= kmax; ++j) {
    mu[j] = qpochhammer(t, t, j) * coeffs[j];
    for (long x = 0; x <= kmax; ++x) a[j][x] = scalar_pow(t, j * x);
  }
  const auto p = solve_linear(std::move(a), std::move(mu));
  std::vector<double> pd;
  pd.reserve(p.size());
  for (const auto& v : p) pd.push_back(v.to_double());
  return detail::finalize_law(std::move(pd));
}

struct HeightLaw {
  std::vector<double> pmf;
  double residual = 0;
  double value_error = 0;  // certified bound on every tabulated Schur-side value
};

// End-to-end height-law reconstruction at one quadrant point: one partition
// sweep tabulates the Schur side along the ladder zeta_i = t^{i-1/2}, then
// the collocation solve runs through law_from_observable. Mass the true law
// puts above kmax surfaces in the residual, so kmax should sit a few atoms
// past the effective support.
inline HeightLaw schur_height_law(const Specialization& rho1, const Specialization& rho2,
                                  double t, long kmax, long budget) {
  if (!(t > 0 && t < 1)) throw std::domain_error("schur_height_law: t outside (0,1)");
  if (kmax < 0) throw std::invalid_argument("schur_height_law: negative kmax");
  std::vector<long double> zetas;
  for (long i = 0; i <= kmax; ++i) zetas.push_back(powl(t, static_cast<long double>(i) - 0.5L));
  const auto sweep = detail::observable_sweep(rho1, rho2, zetas, t, budget);
  std::map<Rational, Rational> values;
  long double fmax = 0;
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    values.emplace(Rational::from_long_double_exact(zetas[i]),
                   Rational::from_long_double_exact(sweep.values[i]));
    fmax = std::max(fmax, 1 / qpochhammer(-zetas[i], static_cast<long double>(t), inf));
  }
  const auto law = law_from_observable(values, t, kmax);
  return {law.pmf, law.residual, static_cast<double>(sweep.missing * fmax + 1e-13L)};
}

}  // namespace tpng
