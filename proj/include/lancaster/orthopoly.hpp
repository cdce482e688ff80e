#pragma once

// Laguerre, Charlier and Meixner polynomials by three-term recurrence.
//
// Charlier and Meixner are self-dual (P_n(x) = P_x(n) for the standard,
// unnormalized forms). For fixed x the polynomial is the minimal solution of
// the recurrence in n once n exceeds x, so forward recurrence in n loses all
// accuracy there. We always recur in the smaller index at the larger point,
// where the polynomial is the dominant solution.

#include <cmath>
#include <vector>

#include "lancaster/special.hpp"
#include "lancaster/summation.hpp"

namespace lancaster {

inline constexpr int kMaxPolyOrder = 10000;

/// Polynomial degree in [0, kMaxPolyOrder].
class PolyOrder {
 public:
  explicit PolyOrder(int n);
  int value() const noexcept { return n_; }
  operator int() const noexcept { return n_; }

 private:
  int n_;
};

/// A polynomial value with its overflow-safe log form. `value` may be
/// +-inf or 0 when the magnitude leaves double range; `log_form` never does.
struct PolyValue {
  double value = 0.0;
  LogValue log_form;
};

/// mantissa * exp(log_scale).
template <typename Scalar>
struct Scaled {
  Scalar mantissa{1};
  Scalar log_scale{0};

  LogValue to_log() const {
    using std::abs;
    using std::log;
    if (mantissa == Scalar(0)) return LogValue::zero();
    return {static_cast<double>(log(abs(mantissa)) + log_scale),
            mantissa < Scalar(0) ? -1 : 1};
  }
  Scalar value() const {
    using std::exp;
    return mantissa * exp(log_scale);
  }
};

/// Runs y_{j+1} = (b_j y_j - c_j y_{j-1}) / a_j from y_0 = 1, y_{-1} = 0,
/// rescaling both carried terms whenever they drift out of a safe band.
/// `coeffs(j)` returns {a_j, b_j, c_j}.
template <typename Scalar, typename Coeffs>
class ThreeTermRecurrence {
 public:
  explicit ThreeTermRecurrence(Coeffs coeffs) : coeffs_(coeffs) {}

  int degree() const noexcept { return degree_; }
  Scaled<Scalar> current() const { return {current_, log_scale_}; }

  void advance() {
    const auto [a, b, c] = coeffs_(degree_);
    const Scalar next = (b * current_ - c * previous_) / a;
    previous_ = current_;
    current_ = next;
    ++degree_;
    rescale();
  }

  Scaled<Scalar> advance_to(int n) {
    while (degree_ < n) advance();
    return current();
  }

 private:
  void rescale() {
    using std::abs;
    using std::ldexp;
    const Scalar big = ldexp(Scalar(1), 400);
    const Scalar small = ldexp(Scalar(1), -400);
    const Scalar mag = abs(current_) > abs(previous_) ? abs(current_) : abs(previous_);
    if (mag > big) {
      current_ = ldexp(current_, -400);
      previous_ = ldexp(previous_, -400);
      log_scale_ += Scalar(400) * ln2();
    } else if (mag < small && mag > Scalar(0)) {
      current_ = ldexp(current_, 400);
      previous_ = ldexp(previous_, 400);
      log_scale_ -= Scalar(400) * ln2();
    }
  }

  static Scalar ln2() {
    using std::log;
    return log(Scalar(2));
  }

  Coeffs coeffs_;
  Scalar previous_{0};
  Scalar current_{1};
  Scalar log_scale_{0};
  int degree_ = 0;
};

template <typename Scalar>
struct RecurrenceCoeffs {
  Scalar a, b, c;
};

/// L_j^(alpha)(x): (j+1) L_{j+1} = (2j+1+alpha-x) L_j - (j+alpha) L_{j-1}.
template <typename Scalar>
auto laguerre_recurrence(Scalar alpha, Scalar x) {
  auto coeffs = [alpha, x](int j) {
    const Scalar js(j);
    return RecurrenceCoeffs<Scalar>{js + 1, 2 * js + 1 + alpha - x, js + alpha};
  };
  return ThreeTermRecurrence<Scalar, decltype(coeffs)>(coeffs);
}

/// Standard Charlier C_j(p; a) = sum_k C(j,k) C(p,k) k! (-1/a)^k:
/// a C_{j+1} = (j + a - p) C_j - j C_{j-1}.
template <typename Scalar>
auto charlier_recurrence(Scalar a, Scalar p) {
  auto coeffs = [a, p](int j) {
    const Scalar js(j);
    return RecurrenceCoeffs<Scalar>{a, js + a - p, js};
  };
  return ThreeTermRecurrence<Scalar, decltype(coeffs)>(coeffs);
}

/// Standard Meixner M_j(p; beta, c) = 2F1(-j, -p; beta; 1 - 1/c):
/// c (j+beta) M_{j+1} = [(c-1) p + j + (j+beta) c] M_j - j M_{j-1}.
template <typename Scalar>
auto meixner_recurrence(Scalar beta, Scalar c, Scalar p) {
  auto coeffs = [beta, c, p](int j) {
    const Scalar js(j);
    return RecurrenceCoeffs<Scalar>{c * (js + beta),
                                    (c - 1) * p + js + (js + beta) * c, js};
  };
  return ThreeTermRecurrence<Scalar, decltype(coeffs)>(coeffs);
}

/// Unnormalized Laguerre L_n^(alpha)(x), alpha > -1.
PolyValue laguerre(PolyOrder n, double alpha, double x);

/// Charlier normalized by sqrt(a^n / n!), orthonormal under Poisson(a).
PolyValue charlier(PolyOrder n, double a, Count x);

/// Meixner normalized by sqrt(c^n (beta)_n / n!), orthonormal under NB(beta, c).
PolyValue meixner(PolyOrder n, double beta, double c, Count x);

/// Gamma(alpha+1+n) / (Gamma(alpha+1) n!) e^(x/2), which dominates
/// |L_n^(alpha)(x)| for x >= 0, alpha >= 0.
double watson_bound(PolyOrder n, double alpha, double x);

// --- orthonormal basis rows ------------------------------------------------------
//
// phi_n(x) for n = 0, 1, ... at a fixed point, orthonormal under the family
// marginal. Values are cached and extended on demand.

/// sqrt(n! / (alpha)_n) L_n^(alpha-1)(x), orthonormal under Gamma(alpha).
class GammaBasisRow {
 public:
  GammaBasisRow(double alpha, double x);
  LogValue operator()(int n);

 private:
  double alpha_;
  decltype(laguerre_recurrence<double>(0.0, 0.0)) recurrence_;
  std::vector<LogValue> cache_;
};

class CharlierRow {
 public:
  CharlierRow(double a, Count x);
  LogValue operator()(int n);

 private:
  double a_;
  Count x_;
  std::vector<LogValue> cache_;
};

class MeixnerRow {
 public:
  MeixnerRow(double beta, double c, Count x);
  LogValue operator()(int n);

 private:
  double beta_;
  double c_;
  Count x_;
  std::vector<LogValue> cache_;
};

/// Log normalizers turning the standard polynomials into orthonormal ones.
double charlier_log_norm(int n, double a);
double meixner_log_norm(int n, double beta, double c);
double gamma_basis_log_norm(int n, double alpha);

}  // namespace lancaster
