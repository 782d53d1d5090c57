#pragma once

#include <string>

namespace ctdde {

/// Closed interval [lo, hi] of doubles. Arithmetic on intervals uses the
/// natural extension: results enclose the image of every point in the
/// operands up to floating-point rounding of the endpoint computations.
/// Transcendental endpoints (sin, cos, exp, non-integer powers) are padded
/// outward to absorb libm rounding.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  explicit Interval(double v) : lo(v), hi(v) {}
  Interval(double l, double h) : lo(l), hi(h) {}

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool is_point() const { return lo == hi; }
  double width() const { return hi - lo; }

  bool operator==(const Interval&) const = default;
};

Interval hull(Interval a, Interval b);

Interval operator-(Interval a);
Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator*(Interval a, Interval b);
/// Throws IntervalError when b encloses zero.
Interval operator/(Interval a, Interval b);

namespace interval_ops {

Interval abs(Interval a);
Interval exp(Interval a);
Interval sin(Interval a);
Interval cos(Interval a);
Interval floor(Interval a);
/// Fractional part t - floor(t). Returns [0, 1] when `a` spans an integer.
Interval frac(Interval a);
/// a^b. A point integer exponent is evaluated by repeated multiplication;
/// any other exponent requires a.lo > 0 (throws IntervalError otherwise).
Interval pow(Interval a, Interval b);

}  // namespace interval_ops

/// Exact power for integer exponents via repeated multiplication
/// (falls back to std::pow beyond |n| = 4096). n < 0 divides; a == 0 with
/// n < 0 throws EvalError.
double int_pow(double a, long long n);

std::string to_string(Interval a);

}  // namespace ctdde
