#include "ctdde/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ctdde/errors.hpp"
#include "ctdde/util.hpp"

namespace ctdde {

namespace {

// Outward padding for libm results: ~2 ulps of the value, at least 2 ulps
// of 1. Keeps enclosures of sin/cos/exp/pow sound despite rounding.
double pad_down(double x) {
  double p = 4.44e-16 * std::max(1.0, std::abs(x));
  return x - p;
}

double pad_up(double x) {
  double p = 4.44e-16 * std::max(1.0, std::abs(x));
  return x + p;
}

// True if some point c + period*k lies within [a.lo, a.hi].
bool contains_critical(Interval a, double c, double period) {
  double k = std::ceil((a.lo - c) / period);
  return c + period * k <= a.hi;
}

}  // namespace

Interval hull(Interval a, Interval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval operator*(Interval a, Interval b) {
  double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Interval operator/(Interval a, Interval b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) {
    throw IntervalError("possible division by zero", b.lo, b.hi);
  }
  double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

double int_pow(double a, long long n) {
  if (n < 0) {
    if (a == 0.0) throw EvalError("zero base raised to a negative power");
    return 1.0 / int_pow(a, -n);
  }
  if (n > 4096) return std::pow(a, static_cast<double>(n));
  double r = 1.0;
  for (long long i = 0; i < n; ++i) r *= a;
  return r;
}

namespace interval_ops {

Interval abs(Interval a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return {-a.hi, -a.lo};
  return {0.0, std::max(-a.lo, a.hi)};
}

Interval exp(Interval a) {
  return {std::max(0.0, pad_down(std::exp(a.lo))), pad_up(std::exp(a.hi))};
}

Interval sin(Interval a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a.width() >= two_pi) return {-1.0, 1.0};
  double slo = std::sin(a.lo), shi = std::sin(a.hi);
  double m = std::min(slo, shi), M = std::max(slo, shi);
  if (contains_critical(a, std::numbers::pi / 2.0, two_pi)) M = 1.0;
  if (contains_critical(a, -std::numbers::pi / 2.0, two_pi)) m = -1.0;
  return {std::max(-1.0, pad_down(m)), std::min(1.0, pad_up(M))};
}

Interval cos(Interval a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a.width() >= two_pi) return {-1.0, 1.0};
  double clo = std::cos(a.lo), chi = std::cos(a.hi);
  double m = std::min(clo, chi), M = std::max(clo, chi);
  if (contains_critical(a, 0.0, two_pi)) M = 1.0;
  if (contains_critical(a, std::numbers::pi, two_pi)) m = -1.0;
  return {std::max(-1.0, pad_down(m)), std::min(1.0, pad_up(M))};
}

Interval floor(Interval a) { return {std::floor(a.lo), std::floor(a.hi)}; }

Interval frac(Interval a) {
  double fl = std::floor(a.lo), fh = std::floor(a.hi);
  if (fl == fh) return {a.lo - fl, a.hi - fl};
  return {0.0, 1.0};
}

Interval pow(Interval a, Interval b) {
  if (b.is_point() && b.lo == std::rint(b.lo) && std::abs(b.lo) <= 4096.0) {
    long long n = static_cast<long long>(b.lo);
    if (n >= 0) {
      Interval r(1.0);
      for (long long i = 0; i < n; ++i) r = r * a;
      return r;
    }
    Interval denom(1.0);
    for (long long i = 0; i < -n; ++i) denom = denom * a;
    return Interval(1.0) / denom;  // throws when a encloses 0
  }
  if (a.lo <= 0.0) {
    throw IntervalError("power with non-integer exponent requires a positive base",
                        a.lo, a.hi);
  }
  double c1 = std::pow(a.lo, b.lo), c2 = std::pow(a.lo, b.hi);
  double c3 = std::pow(a.hi, b.lo), c4 = std::pow(a.hi, b.hi);
  double m = std::min({c1, c2, c3, c4}), M = std::max({c1, c2, c3, c4});
  return {std::max(0.0, pad_down(m)), pad_up(M)};
}

}  // namespace interval_ops

std::string to_string(Interval a) {
  return "[" + util::fmt_double(a.lo) + ", " + util::fmt_double(a.hi) + "]";
}

}  // namespace ctdde
