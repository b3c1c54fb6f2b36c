#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace pilgrim {

// Unevaluated sum hi + lo carrying roughly twice the precision of a double.
// Built from error-free transformations, so the translation unit must not be
// compiled with contraction or fast-math.
struct Compensated {
  double hi = 0.0;
  double lo = 0.0;

  constexpr Compensated() = default;
  constexpr Compensated(double h) : hi(h) {}  // NOLINT(implicit)
  constexpr Compensated(double h, double l) : hi(h), lo(l) {}

  double value() const noexcept { return hi + lo; }
  bool is_zero() const noexcept { return hi == 0.0 && lo == 0.0; }
  int sign() const noexcept { return hi > 0.0 ? 1 : (hi < 0.0 ? -1 : (lo > 0.0 ? 1 : (lo < 0.0 ? -1 : 0))); }
};

inline Compensated two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline Compensated quick_two_sum(double a, double b) noexcept {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline Compensated two_prod(double a, double b) noexcept {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline Compensated operator-(Compensated a) noexcept { return {-a.hi, -a.lo}; }

inline Compensated operator+(Compensated a, Compensated b) noexcept {
  Compensated s = two_sum(a.hi, b.hi);
  const Compensated t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline Compensated operator-(Compensated a, Compensated b) noexcept { return a + (-b); }

inline Compensated operator*(Compensated a, double b) noexcept {
  Compensated p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline Compensated operator*(Compensated a, Compensated b) noexcept {
  Compensated p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline Compensated operator/(Compensated a, Compensated b) noexcept {
  const double q1 = a.hi / b.hi;
  Compensated r = a - Compensated(two_prod(b.hi, q1)) - Compensated(b.lo * q1);
  const double q2 = r.hi / b.hi;
  r = r - b * q2;
  const double q3 = r.hi / b.hi;
  return quick_two_sum(q1, q2) + Compensated(q3);
}

inline Compensated& operator+=(Compensated& a, Compensated b) noexcept { return a = a + b; }

inline Compensated from_long_double(long double v) noexcept {
  const double hi = static_cast<double>(v);
  return {hi, static_cast<double>(v - hi)};
}

// A real number stored as sign and log-magnitude; sign 0 means exact zero.
struct SignedLog {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static SignedLog from_value(double v) {
    if (v == 0.0) return {};
    return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
  }
  static SignedLog from_compensated(Compensated c) {
    const int s = c.sign();
    if (s == 0) return {};
    const double mag = std::abs(c.value());
    return {s, std::log(mag)};
  }
  double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

inline double log_add_exp(double a, double b) noexcept {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

inline double log_sum_exp(std::span<const double> xs) noexcept {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_binomial(int n, int k) noexcept {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log of the ascending factorial x (x+1) ... (x+n-1).
inline double log_rising(double x, int n) noexcept { return std::lgamma(x + n) - std::lgamma(x); }

}  // namespace pilgrim
