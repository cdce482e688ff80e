#pragma once

// Special-function substrate: log-gamma, Pochhammer symbols, and the
// marginal laws (gamma, Poisson, negative binomial) with their tails,
// quantiles and the integer rejection thresholds used for discrete p-values.

#include <cstdint>

#include "lancaster/summation.hpp"

namespace lancaster {

using Count = std::int64_t;

/// A value in [0, 1]. Throws std::domain_error otherwise.
class Probability {
 public:
  explicit Probability(double value);
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// Unit-scale gamma shape. The kappa comparison bound only covers
/// alpha <= 1; larger shapes are legal but flagged.
class GammaParams {
 public:
  explicit GammaParams(double alpha);
  double alpha() const noexcept { return alpha_; }
  bool in_comparison_range() const noexcept { return alpha_ <= 1.0; }

 private:
  double alpha_;
};

class PoissonParams {
 public:
  explicit PoissonParams(double mean);
  double mean() const noexcept { return mean_; }

 private:
  double mean_;
};

/// Negative binomial with pmf (1-c)^beta c^x (beta)_x / x!.
class NBParams {
 public:
  NBParams(double beta, double c);
  double beta() const noexcept { return beta_; }
  double c() const noexcept { return c_; }

 private:
  double beta_;
  double c_;
};

// --- gamma function family -------------------------------------------------

double log_gamma(double x);

/// (a)_n = a (a+1) ... (a+n-1). Exactly zero when a is a non-positive
/// integer with -a < n.
LogValue log_pochhammer(double a, Count n);
double pochhammer(double a, Count n);

double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Gamma(z+alpha)/Gamma(z+gamma) through log_gamma.
double gamma_ratio_exact(double z, double alpha, double gamma);
/// Two-term large-z expansion z^(alpha-gamma) [1 + (alpha-gamma)(alpha+gamma-1)/(2z)].
double gamma_ratio_tricomi(double z, double alpha, double gamma);

// --- gamma marginal ----------------------------------------------------------

double gamma_pdf(double x, const GammaParams& p);
double gamma_log_pdf(double x, const GammaParams& p);
double gamma_cdf(double x, const GammaParams& p);
/// Upper tail 1 - F(x), computed without cancellation.
double gamma_sf(double x, const GammaParams& p);
/// Inverse of gamma_cdf on [0, 1): bracketing, bisection, one Newton step.
double gamma_quantile(double q, const GammaParams& p);
/// x with gamma_sf(x) = t; accurate for small t where 1 - t rounds.
double gamma_upper_quantile(Probability t, const GammaParams& p);
/// Quantile search restricted to a known bracket [lo, hi].
double gamma_quantile_bracketed(double q, const GammaParams& p, double lo,
                                double hi);

/// Chi-square with v degrees of freedom is 2 x Gamma(v/2). Indicator events
/// are invariant under the common rescaling, so kappa and thresholds can be
/// computed on the unit-scale shape.
struct ChiSquare {
  GammaParams shape;
  static constexpr double scale = 2.0;

  double threshold(Probability t) const {
    return scale * gamma_upper_quantile(t, shape);
  }
};
ChiSquare chi_square(int degrees_of_freedom);

// --- Poisson marginal --------------------------------------------------------

double poisson_pmf(Count x, const PoissonParams& p);
double poisson_log_pmf(Count x, const PoissonParams& p);
double poisson_cdf(Count x0, const PoissonParams& p);
double poisson_sf(Count x0, const PoissonParams& p);
/// x0 = max{x : 1 - F(x) > t}, so that {1 - F(zeta) <= t} = {zeta > x0}.
/// Returns -1 when every outcome rejects.
Count poisson_upper_threshold(Probability t, const PoissonParams& p);

// --- negative binomial marginal ----------------------------------------------

double nb_pmf(Count x, const NBParams& p);
double nb_log_pmf(Count x, const NBParams& p);
double nb_cdf(Count x0, const NBParams& p);
double nb_sf(Count x0, const NBParams& p);
Count nb_upper_threshold(Probability t, const NBParams& p);

}  // namespace lancaster
