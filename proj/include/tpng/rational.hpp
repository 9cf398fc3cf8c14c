#pragma once

// Exact rational scalar on top of GMP, plus the small glue that lets the
// numeric kernels run unchanged in float or exact mode.
//
// Mode rules enforced here:
//   * exact arithmetic is closed: Rational op Rational -> Rational, and there
//     is no constructor from a floating value, so nothing demotes silently;
//   * leaving exact mode is explicit (to_double / to_long_double);
//   * float-mode kernels must not leak non-finite values, see finite_or_throw.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace tpng {

class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                       // NOLINT: implicit by design
  Rational(long n) : v_(static_cast<long>(n)) {}   // NOLINT
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(const std::string& s) : v_(s) { v_.canonicalize(); }

  Rational(double) = delete;
  Rational(long double) = delete;
  Rational(float) = delete;

  // Exact embedding of a binary float; the one sanctioned float->exact route,
  // spelled out so call sites show intent.
  static Rational from_double_exact(double d) {
    if (!std::isfinite(d)) throw std::domain_error("Rational: non-finite");
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), d);
    return Rational(q);
  }

  // Same embedding for the 64-bit extended mantissa.
  static Rational from_long_double_exact(long double v) {
    if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite");
    if (v == 0.0L) return Rational(0);
    int e = 0;
    long double m = std::frexp(v, &e);  // v = m * 2^e, |m| in [0.5, 1)
    const bool neg = m < 0;
    unsigned long long bits = static_cast<unsigned long long>(std::ldexp(neg ? -m : m, 64));
    mpz_class num(static_cast<unsigned long>(bits));
    if (neg) num = -num;
    mpz_class den(1);
    if (e >= 64) mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(e - 64));
    else mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(64 - e));
    return Rational(mpq_class(num, den));
  }

  double to_double() const { return v_.get_d(); }
  long double to_long_double() const {
    // get_d rounds to 53 bits; a double-double split recovers the rest of the
    // 64-bit long double mantissa.
    mpf_class f(0, 192);
    f = v_;
    double hi = f.get_d();
    if (!std::isfinite(hi)) return static_cast<long double>(hi);
    mpf_class rem(f - hi, 192);
    return static_cast<long double>(hi) + static_cast<long double>(rem.get_d());
  }

  const mpq_class& raw() const { return v_; }
  std::string str() const { return v_.get_str(); }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(mpq_class(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
  Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
  Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
  Rational& operator/=(const Rational& b) { *this = *this / b; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

template <class S>
inline constexpr bool is_exact_scalar_v = std::is_same_v<std::decay_t<S>, Rational>;

template <class S>
concept NumericScalar = std::is_floating_point_v<S> || is_exact_scalar_v<S>;

template <NumericScalar S>
S scalar_from_int(long n) {
  if constexpr (is_exact_scalar_v<S>) return Rational(n);
  else return static_cast<S>(n);
}

template <NumericScalar S>
S scalar_from_ratio(long num, long den) {
  if constexpr (is_exact_scalar_v<S>) return Rational(num, den);
  else return static_cast<S>(num) / static_cast<S>(den);
}

template <NumericScalar S>
double scalar_to_double(const S& v) {
  if constexpr (is_exact_scalar_v<S>) return v.to_double();
  else return static_cast<double>(v);
}

template <NumericScalar S>
bool scalar_is_zero(const S& v) {
  if constexpr (is_exact_scalar_v<S>) return v.is_zero();
  else return v == S(0);
}

// Integer power with negative exponents; the exact overload never rounds.
template <NumericScalar S>
S scalar_pow(const S& base, long e) {
  if (e == 0) return scalar_from_int<S>(1);
  if (e < 0) return scalar_from_int<S>(1) / scalar_pow(base, -e);
  S acc = scalar_from_int<S>(1);
  S b = base;
  unsigned long n = static_cast<unsigned long>(e);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

template <std::floating_point F>
F finite_or_throw(F v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite result");
  return v;
}

// Compensated accumulation for float modes, plain accumulation for exact mode.
template <NumericScalar S>
class StableSum {
 public:
  void add(const S& x) {
    if constexpr (is_exact_scalar_v<S>) {
      sum_ += x;
    } else {
      S y = x - comp_;
      S t = sum_ + y;
      comp_ = (t - sum_) - y;
      sum_ = t;
    }
  }
  const S& value() const { return sum_; }

 private:
  S sum_ = scalar_from_int<S>(0);
  S comp_ = scalar_from_int<S>(0);
};

}  // namespace tpng
