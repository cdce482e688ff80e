#pragma once

// Indicator covariances kappa = cov(1{p_i <= t}, 1{p_j <= t}) for the four
// Lancaster laws, their brute-force check, the comparison constant
// C = sup |kappa(rho)| / rho, the variance majorant of m^-1 R_m(t), and the
// partial sums of the Lyons criterion.
//
// Every kappa series has the form sum_{n >= 1} rho^n a_n b_n where a_n, b_n
// are partial integrals (or partial sums) of f phi_n up to the rejection
// threshold. For the single-family laws a_n = b_n, so every term is >= 0.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lancaster/design.hpp"
#include "lancaster/lancaster.hpp"
#include "lancaster/special.hpp"

namespace lancaster {

struct KappaResult {
  double value = 0.0;
  int n_used = 0;
  double tail_bound = 0.0;  // magnitude of the first discarded term
};

enum class PairClass { E1, E2 };

/// E1: |rho_ij| = 1 (linearly dependent pair), E2: |rho_ij| < 1.
PairClass classify_pair(double rho_ij);

struct KappaOptions {
  /// The kappa/rho comparison bound is only established for gamma shapes in (0, 1].
  bool allow_alpha_above_one = false;
};

/// int_0^y x^alpha e^-x L_n^(alpha)(x) dx = y^(alpha+1) e^-y L_{n-1}^(alpha+1)(y) / n.
double laguerre_partial_integral(int n, double alpha, double y);

KappaResult kappa_gamma(const GammaParams& gamma, double rho, Probability t,
                        const Truncation& trunc = {}, KappaOptions opts = {});
KappaResult kappa_poisson(const PoissonParams& poisson, double rho, Probability t,
                          const Truncation& trunc = {});
KappaResult kappa_nb(const NBParams& nb, double rho, Probability t,
                     const Truncation& trunc = {});
/// Mixed law: NB threshold x0 on the first coordinate, gamma quantile tau on
/// the second. Terms carry signs; the sum is not a sum of squares.
KappaResult kappa_gamma_nb(const GammaParams& gamma, const NBParams& nb, double rho,
                           Probability t, const Truncation& trunc = {});

/// Dispatches on the pair's family.
KappaResult kappa(const LancasterPair& pair, Probability t, const Truncation& trunc = {},
                  KappaOptions opts = {});

struct OracleSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  Truncation trunc{};
};

/// P(X <= a, Y <= b) - F(a) G(b) from the joint density itself: cell sums
/// for integer coordinates, nested adaptive quadrature for gamma ones. This
/// equals cov(1{X > a}, 1{Y > b}) and never touches the kappa series.
double kappa_oracle(const LancasterPair& pair, Probability t, const OracleSpec& spec = {});

struct ComparisonConstant {
  double value = 0.0;
  double argmax_rho = 0.0;
  std::vector<double> rho;
  std::vector<double> kappa;
  std::vector<double> ratio;
};

/// sup over the grid of |kappa(rho)| / rho.
ComparisonConstant comparison_constant(const FamilyParams& family, Probability t,
                                       std::span<const double> rho_grid,
                                       const Truncation& trunc = {},
                                       KappaOptions opts = {});

/// {step, 2 step, ...} up to min(rho_max, family limit).
std::vector<double> default_rho_grid(const FamilyParams& family, double step = 0.05,
                                     double rho_max = 0.95);

/// m^-1 maxvar + m^-2 sum_{E2} C |rho_ij| + m^-2 sum_{E1} 1/4.
struct VarianceBound {
  double value = 0.0;
  double independent_part = 0.0;
  double e2_part = 0.0;
  double e1_part = 0.0;
  double constant = 0.0;
  Count e1_pairs = 0;
  Count e2_pairs = 0;
};

/// Bound for a correlation matrix whose off-diagonal pairs follow `family`.
/// Throws std::domain_error if R is not a valid correlation matrix or an E2
/// entry lies outside the family's correlation range.
VarianceBound variance_bound(const Eigen::MatrixXd& R, const FamilyParams& family,
                             Probability t, const Truncation& trunc = {},
                             KappaOptions opts = {});
/// Closed form over the design's blocks; alternatives are ignored.
VarianceBound variance_bound(const DependenceDesign& design, Probability t,
                             const Truncation& trunc = {}, KappaOptions opts = {});
/// Same, with the comparison constant supplied.
VarianceBound variance_bound(const DependenceDesign& design, Probability t,
                             double comparison);

/// Comparison constant over default_rho_grid plus the extra points.
double comparison_constant_for(const FamilyParams& family, Probability t,
                               std::span<const double> extra_rho,
                               const Truncation& trunc = {}, KappaOptions opts = {});

/// S_K = sum_{N=1}^K N^-1 E|Q_N|^2 for K = 1..varseq.size().
std::vector<double> lyons_partial_sums(std::span<const double> varseq);

/// sum_N N^-1 A N^-delta = A zeta(1 + delta): the limit of the partial sums
/// when E|Q_N|^2 <= A N^-delta.
double lyons_majorant(double scale, double delta);

}  // namespace lancaster
