#pragma once

// Random pairs from the Lancaster laws and block-dependent statistic vectors.
//
// Exact constructions:
//   gamma      Kibble: K | X ~ Poisson(rho X / (1 - rho)), Y = (1 - rho) Gamma(alpha + K)
//   Poisson    common shock: W ~ Poisson(rho a) added to two Poisson((1 - rho) a)
//   NB         Poisson mixing of a Kibble gamma pair with correlation rho / c (rho < c)
//   gamma-NB   Poisson mixing of one side of a Kibble pair with correlation rho / sqrt(c)
// plus the shared-gamma NB construction and inverse-CDF sampling from the
// tabulated truncated joint law.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lancaster/design.hpp"
#include "lancaster/lancaster.hpp"
#include "lancaster/rng.hpp"

namespace lancaster {

using Rng = Philox4x32;

double draw_gamma(double shape, Rng& rng);
Count draw_poisson(double mean, Rng& rng);
/// NB(beta, c) as a gamma mixture of Poissons.
Count draw_nb(double beta, double c, Rng& rng);

std::pair<double, double> sample_pair_gamma(const GammaParams& p, double rho, Rng& rng);
std::pair<Count, Count> sample_pair_poisson(const PoissonParams& p, double rho, Rng& rng);
/// Shared gamma mixing G_i = A + B_i, A ~ Gamma(beta r), r = rho / c. Pearson
/// correlation rho, but its canonical correlations are (beta r)_n c^n / (beta)_n
/// rather than rho^n, so it is not a draw from the Meixner law for n >= 2.
std::pair<Count, Count> sample_pair_nb_shared(const NBParams& p, double rho, Rng& rng);
/// Exact Meixner-law pair for 0 <= rho < c.
std::pair<Count, Count> sample_pair_nb(const NBParams& p, double rho, Rng& rng);
/// Exact gamma-NB pair (NB first) for 0 <= rho <= sqrt(c); needs alpha = beta.
std::pair<double, double> sample_pair_gamma_nb(const GammaParams& g, const NBParams& nb,
                                               double rho, Rng& rng);

/// Inverse-CDF sampler over the tabulated truncated joint law of a Poisson,
/// NB or gamma-NB pair. Each discrete coordinate is cut where its marginal
/// tail drops below 1e-10; the gamma coordinate of gamma-NB is split into
/// `gamma_bins` equal-probability bins whose masses are integrated exactly
/// from the series, and a draw inside a bin is uniform in marginal quantile.
/// Negative cells are clipped to zero and the table renormalized; a clipped
/// mass above 1e-6 raises ClippingError.
class GridPairSampler {
 public:
  GridPairSampler(const LancasterPair& pair, const Truncation& trunc = {},
                  int gamma_bins = 2000);

  std::pair<double, double> operator()(Rng& rng) const;

  double clipped_mass() const noexcept { return clipped_; }
  /// Factor the clipped table was multiplied by.
  double renormalization() const noexcept { return renormalization_; }
  /// Cell probabilities, rows = first coordinate.
  const Eigen::MatrixXd& table() const noexcept { return table_; }
  /// Gamma bin edges (gamma-NB only); size bins + 1, last edge +inf.
  const std::vector<double>& bin_edges() const noexcept { return edges_; }

 private:
  Eigen::MatrixXd table_;
  std::vector<double> cumulative_;  // column-major running sum of table_
  std::vector<double> edges_;
  double gamma_alpha_ = 0.0;
  double clipped_ = 0.0;
  double renormalization_ = 1.0;
};

/// Builds a GridPairSampler for one draw; costly, for testing only.
std::pair<double, double> sample_pair_grid(const LancasterPair& pair, const Truncation& trunc,
                                           Rng& rng);

struct StatisticVector {
  std::vector<double> values;
  std::vector<bool> null_mask;  // true = null hypothesis holds
};

/// Which sampler fills a design's blocks.
enum class SamplerPath {
  gamma_kibble,
  poisson_shock,
  nb_kibble,
  nb_grid,
  gamma_nb_mixture,
  gamma_nb_grid
};

/// Blocks share one driver so that every within-block pair follows the law
/// with correlation rho: the latent Kibble gamma W (gamma, NB), or the shock
/// W (Poisson). NB with rho >= c and gamma-NB support blocks of size <= 2 only;
/// both use the grid sampler unless gamma-NB has alpha = beta.
/// gamma-NB puts NB at even and gamma at odd positions.
class VectorSampler {
 public:
  explicit VectorSampler(DependenceDesign design, const Truncation& trunc = {});

  const DependenceDesign& design() const noexcept { return design_; }
  SamplerPath path() const noexcept { return path_; }

  /// Coordinates drawn from stream(seed, replication, block index); the null
  /// positions from stream(seed, replication, 2^32 - 1).
  StatisticVector operator()(std::uint64_t replication) const;
  void sample_into(std::uint64_t replication, StatisticVector& out) const;

 private:
  void fill_block(Rng& rng, Count start, Count size, std::vector<double>& values) const;
  void apply_alternative(Rng& rng, Count index, double& value) const;

  DependenceDesign design_;
  SamplerPath path_;
  std::vector<GridPairSampler> grid_;  // one sampler for the grid paths
};

/// Marginal law of coordinate `index` in a design vector.
MarginalLaw coordinate_law(const FamilyParams& family, Count index);

}  // namespace lancaster
