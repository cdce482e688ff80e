#pragma once

// The four Lancaster bivariate laws
//
//   h(x, y) = f(x) g(y) sum_n rho^n phi_n(x) psi_n(y)
//
// with phi_n, psi_n orthonormal under the marginals f, g: Laguerre for the
// gamma law, Charlier for Poisson, Meixner for negative binomial, and the
// mixed negative binomial (first coordinate) x gamma (second coordinate) law.

#include <string>
#include <variant>

#include <Eigen/Dense>

#include "lancaster/special.hpp"

namespace lancaster {

struct GammaFamily {
  GammaParams params;
};
struct PoissonFamily {
  PoissonParams params;
};
struct NegBinomialFamily {
  NBParams params;
};
/// First coordinate NB(beta, c), second coordinate Gamma(alpha).
struct GammaNBFamily {
  GammaParams gamma;
  NBParams nb;
};

using FamilyParams =
    std::variant<GammaFamily, PoissonFamily, NegBinomialFamily, GammaNBFamily>;

enum class Coordinate { first, second };

std::string family_name(const FamilyParams& family);

/// Upper end of the admissible canonical correlation, and whether it is
/// attained: [0, 1) gamma and NB, [0, 1] Poisson, [0, sqrt(c)] gamma-NB.
double rho_upper_limit(const FamilyParams& family);
bool rho_limit_inclusive(const FamilyParams& family);
bool rho_admissible(const FamilyParams& family, double rho);

/// One marginal of a family: gamma (continuous) or Poisson / NB (integer).
class MarginalLaw {
 public:
  using Params = std::variant<GammaParams, PoissonParams, NBParams>;

  explicit MarginalLaw(Params params) : params_(params) {}

  bool discrete() const { return !std::holds_alternative<GammaParams>(params_); }
  const Params& params() const { return params_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  /// 1 - F(x), computed without cancellation.
  double sf(double x) const;
  /// Point where the null tail drops to t: the gamma quantile tau with
  /// sf(tau) = t, or the integer x0 = max{x : sf(x) > t}. In both cases
  /// {p <= t} = {zeta > threshold} up to a null set.
  double upper_threshold(Probability t) const;
  /// P(p <= t) under this law: t for gamma, sf(x0) for discrete laws.
  double rejection_probability(Probability t) const;
  /// Smallest cut with tail mass sf(cut) below `mass`.
  double tail_cut(double mass) const;

 private:
  Params params_;
};

MarginalLaw marginal_law(const FamilyParams& family, Coordinate coordinate);

/// A family plus its canonical correlation.
class LancasterPair {
 public:
  LancasterPair(FamilyParams family, double rho);

  const FamilyParams& family() const noexcept { return family_; }
  double rho() const noexcept { return rho_; }

 private:
  FamilyParams family_;
  double rho_;
};

/// Truncation policy for the infinite canonical series. The series stops
/// after three consecutive terms below tail_tol; reaching n_max first is a
/// NonConvergenceError.
struct Truncation {
  int n_max = 400;
  double tail_tol = 1e-12;

  void validate() const;
};

struct SeriesValue {
  double value = 0.0;
  double last_term = 0.0;  // magnitude of the final term summed
  int terms = 0;
};

/// Truncated h(x, y). Small negative values are reported as they are.
SeriesValue joint_density(const LancasterPair& pair, double x, double y,
                          const Truncation& trunc = {});

/// Marginal density or pmf; for gamma-NB the first coordinate is NB and the
/// second gamma.
double marginal(const FamilyParams& family, Coordinate coordinate, double x);

/// Joint pmf on {0..x_cut} x {0..y_cut} for Poisson or NB families, built as
/// sum_n rho^n u_n v_n^T with u_n = f * phi_n.
Eigen::MatrixXd joint_table(const LancasterPair& pair, const Truncation& trunc,
                            Count x_cut, Count y_cut);

/// Total truncated mass over [0, x_cut] x [0, y_cut]: summation for integer
/// coordinates, adaptive quadrature for gamma coordinates.
double grid_mass(const LancasterPair& pair, const Truncation& trunc,
                 double x_cut, double y_cut);

}  // namespace lancaster
