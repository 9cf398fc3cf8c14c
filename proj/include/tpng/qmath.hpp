#pragma once

// q-Pochhammer symbols and small q-series helpers used across the vertex
// weights and the symmetric-function code.
//
//   (a;q)_k    = prod_{j=0}^{k-1} (1 - a q^j)            for k >= 0,
//   (a;q)_{-m} = 1 / prod_{l=1}^{m} (1 - a q^{-l}),
//   (a;q)_inf  = prod_{j>=0} (1 - a q^j)                 for |q| < 1.

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "tpng/rational.hpp"

namespace tpng {

struct inf_t {};
inline constexpr inf_t inf{};

template <NumericScalar S>
S qpochhammer(const S& a, const S& q, long k) {
  const S one = scalar_from_int<S>(1);
  if (k >= 0) {
    S acc = one;
    S aq = a;
    for (long j = 0; j < k; ++j) {
      acc *= one - aq;
      aq *= q;
    }
    return acc;
  }
  // negative subscript: divide out factors below the base index
  if (scalar_is_zero(q)) throw std::domain_error("qpochhammer: negative subscript at q=0");
  S acc = one;
  S aq = a;
  for (long l = 1; l <= -k; ++l) {
    aq /= q;
    S factor = one - aq;
    if (scalar_is_zero(factor)) throw std::domain_error("qpochhammer: pole at negative subscript");
    acc *= factor;
  }
  return one / acc;
}

// Infinite product, float modes only. Truncates once the running factor is
// provably within 1e-17 of 1, never before 8 factors.
template <std::floating_point F>
F qpochhammer(F a, F q, inf_t) {
  if (!(std::abs(q) < F(1))) throw std::domain_error("qpochhammer: (a;q)_inf needs |q| < 1");
  F acc = 1;
  F aq = a;
  int j = 0;
  while (j < 8 || std::abs(aq) > F(1e-17L)) {
    acc *= F(1) - aq;
    aq *= q;
    ++j;
    if (j > 100000) throw std::domain_error("qpochhammer: (a;q)_inf did not converge");
  }
  return finite_or_throw(acc, "qpochhammer");
}

// (q^e; q)_k for integer exponent e, the form every vertex weight needs.
template <NumericScalar S>
S qpochhammer_qexp(long e, const S& q, long k) {
  return qpochhammer(scalar_pow(q, e), q, k);
}

// Partial sums of the q-exponential  sum_j z^j / (q;q)_j  =  1/(z;q)_inf.
template <std::floating_point F>
F q_exponential(F z, F q, int terms) {
  F acc = 1, term = 1, qj = 1;
  for (int j = 1; j < terms; ++j) {
    qj *= q;
    term *= z / (F(1) - qj);
    acc += term;
  }
  return finite_or_throw(acc, "q_exponential");
}

}  // namespace tpng
