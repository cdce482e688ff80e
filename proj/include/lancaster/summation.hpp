#pragma once

#include <cmath>

namespace lancaster {

/// Neumaier's variant of Kahan summation: robust when an addend exceeds the
/// running sum in magnitude, which happens with alternating series terms.
template <typename Scalar>
struct CompensatedSum {
  Scalar sum = Scalar{0};
  Scalar compensation = Scalar{0};

  CompensatedSum& operator+=(Scalar value) {
    const Scalar t = sum + value;
    using std::abs;
    if (abs(sum) >= abs(value)) {
      compensation += (sum - t) + value;
    } else {
      compensation += (value - t) + sum;
    }
    sum = t;
    return *this;
  }

  Scalar value() const { return sum + compensation; }
};

/// Magnitude/sign pair for quantities that overflow or underflow a double.
struct LogValue {
  double log_abs = 0.0;  // -inf encodes an exact zero
  int sign = 1;

  static LogValue zero() { return {-INFINITY, 0}; }
  static LogValue from(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::abs(v)), v < 0 ? -1 : 1};
  }
  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  friend LogValue operator*(LogValue a, LogValue b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.log_abs + b.log_abs, a.sign * b.sign};
  }
};

}  // namespace lancaster
