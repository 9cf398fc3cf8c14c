#pragma once

// Vertex weights for the growth models.
//
// fused_weight is the J-fused transfer weight on a quadrant vertex. Its
// terminal-sum factors are stored as ratios folded per summation index,
//   (a;t)_n / (a;t)_k = (a t^k;t)_{n-k},
// so configurations whose unfolded prefactor and in-sum denominator both
// vanish evaluate to the correct finite value instead of 0/0.
//
// psi_weight / theta_weight are the two column degenerations (column spin to
// infinity resp. zero) that drive the continuum growth picture; phi_weight is
// the two-parameter tile approximation; tboson_weight and sixvertex_weight
// are the classical reductions. All of them are stochastic in the outputs
// except the t-boson table, which is not normalized.

#include <algorithm>
#include <stdexcept>

#include "tpng/qmath.hpp"
#include "tpng/rational.hpp"

namespace tpng {

// one vertex event: (in-vertical, in-horizontal) -> (out-vertical, out-horizontal)
struct ArrowConfig {
  long i1 = 0, j1 = 0, i2 = 0, j2 = 0;
};

template <NumericScalar S>
struct FusedParams {
  S z;     // spectral parameter of the row/column pair
  long J;  // horizontal capacity; the row spin enters as r^{-2} = t^J
  S s;     // column spin parameter
  S t;
};

namespace detail {

inline void check_config(const ArrowConfig& c) {
  if (c.i1 < 0 || c.j1 < 0 || c.i2 < 0 || c.j2 < 0)
    throw std::domain_error("ArrowConfig: negative arrow count");
}

template <NumericScalar S>
S result_guard(const S& v, const char* what) {
  if constexpr (is_exact_scalar_v<S>) {
    (void)what;
    return v;
  } else {
    return finite_or_throw(v, what);
  }
}

}  // namespace detail

template <NumericScalar S>
S fused_weight(const FusedParams<S>& p, const ArrowConfig& c) {
  detail::check_config(c);
  if (p.J < 1) throw std::domain_error("fused_weight: J must be >= 1");
  if (scalar_is_zero(p.t)) throw std::domain_error("fused_weight: t must be nonzero");
  if (scalar_is_zero(p.s)) throw std::domain_error("fused_weight: s must be nonzero");

  const S zero = scalar_from_int<S>(0), one = scalar_from_int<S>(1);
  if (c.i1 + c.j1 != c.i2 + c.j2 || c.j1 > p.J || c.j2 > p.J) return zero;

  const S& t = p.t;
  const S& z = p.z;
  const S& s = p.s;
  const long i1 = c.i1, j1 = c.j1, i2 = c.i2, j2 = c.j2, J = p.J;

  if (scalar_is_zero(z) && i1 > 0) return zero;  // prefactor carries z^{i1}

  // prefactor, with the three k-foldable products left out
  S pre = (i1 % 2 == 0) ? one : -one;
  pre *= scalar_pow(t, i1 * (i1 - 1) / 2 + i1 * j1);
  pre *= scalar_pow(z, i1);
  pre *= scalar_pow(s, j1 + j2 - i2);
  pre *= qpochhammer(z / s, t, j2 - i1);
  pre /= qpochhammer(t, t, i2);
  pre /= qpochhammer(s * z, t, i2 + j2);
  pre /= qpochhammer(scalar_pow(t, J + 1 - j1), t, j1 - j2);

  const S tJsz = scalar_pow(t, J) * s * z;
  S tsz_inv = zero;
  if (!scalar_is_zero(z)) tsz_inv = t * s / z;

  StableSum<S> sum;
  const long kmax = std::min(i1, i2);
  for (long k = 0; k <= kmax; ++k) {
    S term = scalar_pow(t, k);
    term *= qpochhammer_qexp(-i2, t, k);
    term *= qpochhammer_qexp(-i1, t, k);
    term *= qpochhammer(tJsz, t, k);
    term *= qpochhammer(tsz_inv, t, k);
    term /= qpochhammer(t, t, k);
    term *= qpochhammer(s * s * scalar_pow(t, k), t, i2 - k);
    term *= qpochhammer_qexp(j2 - i1 + 1 + k, t, i2 - k);
    term *= qpochhammer_qexp(J + 1 - i2 - j2 + k, t, i2 - k);
    sum.add(term);
  }
  return detail::result_guard(pre * sum.value(), "fused_weight");
}

// Column spin s -> infinity degeneration. The transition lives on height
// pairs (i, h) with i1 - h1 = i2 - h2; A > 0 and t in (0,1).
template <std::floating_point F>
F psi_weight(F A, long i1, long h1, long i2, long h2, F t) {
  if (i1 < 0 || h1 < 0 || i2 < 0 || h2 < 0)
    throw std::domain_error("psi_weight: negative index");
  if (!(A > 0) || !(t > 0) || !(t < 1)) throw std::domain_error("psi_weight: need A > 0, t in (0,1)");
  if (i1 - h1 != i2 - h2) return 0;

  F pre = std::pow(A, static_cast<F>(-i2));
  pre *= std::pow(t, static_cast<F>(i2) * (i2 + h1));
  pre *= qpochhammer(std::pow(t, static_cast<F>(i2 + h1 + 1)) / A, t, inf);
  pre *= qpochhammer_qexp(1, t, h1);
  pre /= qpochhammer_qexp(1, t, i2);
  pre /= qpochhammer_qexp(1, t, h2);
  // far-tail outputs underflow the prefactor; the weight is then zero and the
  // alternating sum must not be evaluated (its terms overflow)
  if (pre == 0) return 0;

  StableSum<F> sum;
  const long kmax = std::min(i1, i2);
  for (long k = 0; k <= kmax; ++k) {
    F term = std::pow(A * t, static_cast<F>(k));
    term *= qpochhammer_qexp(-i2, t, k);
    term *= qpochhammer_qexp(-i1, t, k);
    term /= qpochhammer_qexp(1, t, k);
    term *= qpochhammer_qexp(h2 - i2 + 1 + k, t, i2 - k);
    sum.add(term);
  }
  return finite_or_throw(pre * sum.value(), "psi_weight");
}

// Column spin s -> 0 degeneration, same support as psi_weight.
template <std::floating_point F>
F theta_weight(F A, long i1, long h1, long i2, long h2, F t) {
  if (i1 < 0 || h1 < 0 || i2 < 0 || h2 < 0)
    throw std::domain_error("theta_weight: negative index");
  if (!(A > 0) || !(t > 0) || !(t < 1))
    throw std::domain_error("theta_weight: need A > 0, t in (0,1)");
  if (i1 - h1 != i2 - h2) return 0;

  F pre = std::pow(t, static_cast<F>(i2) * (i2 + 1) / 2 + static_cast<F>(i2) * h1);
  pre *= std::pow(A, static_cast<F>(-i2));
  pre *= qpochhammer_qexp(1, t, h1);
  pre /= qpochhammer(-std::pow(t, static_cast<F>(h2 - i2 + 1)) / A, t, inf);
  pre /= qpochhammer_qexp(1, t, i2);
  pre /= qpochhammer_qexp(1, t, h2);
  if (pre == 0) return 0;

  StableSum<F> sum;
  const long kmax = std::min(i1, i2);
  for (long k = 0; k <= kmax; ++k) {
    F term = std::pow(t, static_cast<F>(k));
    term *= qpochhammer_qexp(-i1, t, k);
    term *= qpochhammer_qexp(-i2, t, k);
    term *= qpochhammer(-A, t, k);
    term /= qpochhammer_qexp(1, t, k);
    term *= qpochhammer_qexp(h2 - i2 + 1 + k, t, i2 - k);
    sum.add(term);
  }
  return finite_or_throw(pre * sum.value(), "theta_weight");
}

// Tile weights of the lattice growth approximation: nucleate with probability
// (theta*eps)^2, transport deterministically, resolve collisions by t.
template <NumericScalar S>
S phi_weight(const S& eps, const S& theta, const S& t, const ArrowConfig& c) {
  detail::check_config(c);
  const S zero = scalar_from_int<S>(0), one = scalar_from_int<S>(1);
  if (c.i1 > 1 || c.j1 > 1 || c.i2 > 1 || c.j2 > 1) return zero;
  const S b = eps * theta * eps * theta;
  if (scalar_to_double(b) > 1.0) throw std::domain_error("phi_weight: (eps*theta)^2 > 1");
  const long key = c.i1 * 1000 + c.j1 * 100 + c.i2 * 10 + c.j2;
  switch (key) {
    case 0:    return one - b;   // (0,0;0,0)
    case 11:   return b;         // (0,0;1,1)
    case 1010: return one;       // (1,0;1,0)
    case 101:  return one;       // (0,1;0,1)
    case 1100: return one - t;   // (1,1;0,0)
    case 1111: return t;         // (1,1;1,1)
    default:   return zero;
  }
}

// t-boson table; horizontal edges carry at most one arrow. Not stochastic.
template <NumericScalar S>
S tboson_weight(const S& x, const S& t, const ArrowConfig& c) {
  detail::check_config(c);
  const S zero = scalar_from_int<S>(0), one = scalar_from_int<S>(1);
  if (c.j1 > 1 || c.j2 > 1) return zero;
  if (c.j1 == 0 && c.j2 == 0) return c.i2 == c.i1 ? one : zero;
  if (c.j1 == 0 && c.j2 == 1)
    return c.i2 == c.i1 - 1 ? x * (one - scalar_pow(t, c.i1)) : zero;
  if (c.j1 == 1 && c.j2 == 0) return c.i2 == c.i1 + 1 ? one : zero;
  return c.i2 == c.i1 ? x : zero;  // (i,1;i,1)
}

// six-vertex table in the ratio parameter w
template <NumericScalar S>
S sixvertex_weight(const S& w, const S& t, const ArrowConfig& c) {
  detail::check_config(c);
  const S zero = scalar_from_int<S>(0), one = scalar_from_int<S>(1);
  if (c.i1 > 1 || c.j1 > 1 || c.i2 > 1 || c.j2 > 1) return zero;
  if (c.i1 + c.j1 != c.i2 + c.j2) return zero;
  const S den = one - t * w;
  if (scalar_is_zero(den)) throw std::domain_error("sixvertex_weight: pole at t*w = 1");
  if (c.i1 == 0 && c.j1 == 0) return one;
  if (c.i1 == 1 && c.j1 == 1) return one;
  if (c.i1 == 1 && c.j1 == 0)
    return c.i2 == 1 ? t * (one - w) / den : (one - t) / den;
  // (0,1;...)
  return c.j2 == 1 ? (one - w) / den : (one - t) * w / den;
}

}  // namespace tpng
