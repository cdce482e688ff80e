#pragma once

// p-values, rejection counts, FDP, the Storey-type estimate theta of the FDP,
// and the simulation runners built on them.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "lancaster/design.hpp"
#include "lancaster/sampler.hpp"

namespace lancaster {

struct MtpOutcome {
  Count R = 0;
  Count V = 0;
  double fdp = 0.0;
  double theta = 0.0;
  Count m = 0;
  Count m0 = 0;
  double t = 0.0;
};

/// p_i = 1 - F(zeta_i) under the null law of coordinate i.
std::vector<double> pvalues(const StatisticVector& stats, const FamilyParams& family);

/// R, V and fdp = V / max(R, 1). theta is left at 0.
MtpOutcome count(std::span<const double> p, const std::vector<bool>& null_mask, Probability t);

/// #{p_i > lambda} / ((1 - lambda) m), clipped to (0, 1].
double storey_pi0(std::span<const double> p, Probability lambda);

/// pi0_hat P(p_0 <= t) / (max(R, 1) / m_tilde).
double theta_estimator(double pi0_hat, Probability p0_rejection, Count R, Count m_tilde);

/// Mean over the m coordinates of P(p_i <= t) under the null.
double null_rejection_probability(const FamilyParams& family, Count m, Probability t);

/// Counts rejections directly on the statistics, without forming p-values:
/// p <= t iff zeta >= tau (gamma) or zeta > x0 (integer laws).
class ThresholdCounter {
 public:
  ThresholdCounter(const FamilyParams& family, Count m, Probability t,
                   Probability storey_lambda = Probability(0.5));

  /// R, V, fdp and theta for one vector.
  MtpOutcome operator()(const StatisticVector& stats) const;
  /// Whether coordinate `index` with statistic `value` is rejected at t.
  bool rejects(Count index, double value) const;

 private:
  struct Cut {
    double reject;  // reject iff value > reject (or >= for continuous)
    double storey;  // p > lambda iff value < storey (or <= for integer laws)
    bool discrete;
  };
  const Cut& cut(Count index) const { return cuts_[cuts_.size() == 1 ? 0 : index % 2]; }

  std::vector<Cut> cuts_;
  Count m_;
  double t_;
  double lambda_;
  double p0_;
};

struct RunOptions {
  double t = 0.05;
  double storey_lambda = 0.5;
  unsigned threads = 1;
};

/// One outcome per replication 0..replications-1, in replication order.
std::vector<MtpOutcome> simulate(const DependenceDesign& design, Count replications,
                                 const RunOptions& opts, const Truncation& trunc = {});

struct Dispersion {
  double mean = 0.0;
  double sd = 0.0;
  double max_abs_dev = 0.0;
};

Dispersion dispersion(std::span<const double> values);

struct SllnRow {
  Count m = 0;
  Count m0 = 0;
  Count block_size = 0;
  Dispersion rejection_rate;  // m^-1 R_m(t)
  Dispersion false_rate;      // m0^-1 V_m(t)
};

struct SllnTrace {
  std::vector<SllnRow> rows;
  double slope_rejection = 0.0;  // log-log slope of sd against m
  double slope_false = 0.0;
};

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Child seed for the design at each m is mix_seed(seed, m).
SllnTrace slln_sweep(const DesignTemplate& tmpl, std::span<const Count> m_grid,
                     Count replications, std::uint64_t seed, const RunOptions& opts,
                     const Truncation& trunc = {});

struct CurvePoint {
  double t = 0.0;
  Dispersion g0;  // m0^-1 V_m(t); empty when m0 = 0
  Dispersion g1;  // (m - m0)^-1 (R_m - V_m)(t); empty when m0 = m
  double g0_band = 0.0;  // 2.5%-97.5% quantile width
  double g1_band = 0.0;
};

struct WeakDependenceCurves {
  Count m = 0;
  Count m0 = 0;
  std::vector<CurvePoint> points;
};

std::vector<WeakDependenceCurves> weak_dependence_curves(
    const DesignTemplate& tmpl, std::span<const Count> m_grid, std::span<const double> t_grid,
    Count replications, std::uint64_t seed, unsigned threads = 1, const Truncation& trunc = {});

/// Header m,replication,R,V,fdp,theta; floats with 17 significant digits.
void write_outcomes_csv(std::ostream& os, std::span<const MtpOutcome> outcomes);

/// Runs body(i) for i in [0, n) on up to `threads` threads.
void parallel_for(Count n, unsigned threads, const std::function<void(Count)>& body);

}  // namespace lancaster
