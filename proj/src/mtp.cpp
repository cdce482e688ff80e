#include "lancaster/mtp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "lancaster/summation.hpp"

namespace lancaster {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

double null_pvalue(const MarginalLaw& law, double zeta) {
  if (!law.discrete()) {
    require(zeta >= 0.0, "gamma statistic must be >= 0");
    return zeta == 0.0 ? 1.0 : law.sf(zeta);
  }
  require(zeta >= 0.0 && std::floor(zeta) == zeta, "count statistic must be a non-negative integer");
  return law.sf(zeta);
}

// Law of coordinate i repeats with period 1 (single-family) or 2 (gamma-NB).
int law_period(const FamilyParams& family) {
  return std::holds_alternative<GammaNBFamily>(family) ? 2 : 1;
}

}  // namespace

std::vector<double> pvalues(const StatisticVector& stats, const FamilyParams& family) {
  const int period = law_period(family);
  std::vector<MarginalLaw> laws;
  for (int k = 0; k < period; ++k) laws.push_back(coordinate_law(family, k));
  std::vector<double> p(stats.values.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = null_pvalue(laws[i % period], stats.values[i]);
  }
  return p;
}

MtpOutcome count(std::span<const double> p, const std::vector<bool>& null_mask, Probability t) {
  if (p.size() != null_mask.size()) {
    throw std::invalid_argument("p-values and null mask differ in length");
  }
  MtpOutcome out;
  out.m = static_cast<Count>(p.size());
  out.t = t.value();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (null_mask[i]) ++out.m0;
    if (p[i] <= t.value()) {
      ++out.R;
      if (null_mask[i]) ++out.V;
    }
  }
  out.fdp = static_cast<double>(out.V) / static_cast<double>(std::max<Count>(out.R, 1));
  return out;
}

double storey_pi0(std::span<const double> p, Probability lambda) {
  require(lambda.value() > 0.0 && lambda.value() < 1.0, "Storey lambda must lie in (0, 1)");
  require(!p.empty(), "Storey estimate needs at least one p-value");
  const auto above = std::count_if(p.begin(), p.end(), [&](double v) { return v > lambda; });
  const double est =
      static_cast<double>(above) / ((1.0 - lambda.value()) * static_cast<double>(p.size()));
  // the estimate is 0 only when no p-value exceeds lambda; keep it positive
  if (est <= 0.0) {
    return std::min(1.0 / ((1.0 - lambda.value()) * static_cast<double>(p.size())), 1.0);
  }
  return std::min(est, 1.0);
}

double theta_estimator(double pi0_hat, Probability p0_rejection, Count R, Count m_tilde) {
  require(m_tilde >= 1, "theta needs m_tilde >= 1");
  const double rate = static_cast<double>(std::max<Count>(R, 1)) / static_cast<double>(m_tilde);
  return pi0_hat * p0_rejection.value() / rate;
}

double null_rejection_probability(const FamilyParams& family, Count m, Probability t) {
  require(m >= 1, "null rejection probability needs m >= 1");
  const int period = law_period(family);
  if (period == 1) return coordinate_law(family, 0).rejection_probability(t);
  const Count even = (m + 1) / 2;
  const Count odd = m / 2;
  return (static_cast<double>(even) * coordinate_law(family, 0).rejection_probability(t) +
          static_cast<double>(odd) * coordinate_law(family, 1).rejection_probability(t)) /
         static_cast<double>(m);
}

// --- threshold counting ----------------------------------------------------------

ThresholdCounter::ThresholdCounter(const FamilyParams& family, Count m, Probability t,
                                   Probability storey_lambda)
    : m_(m), t_(t.value()), lambda_(storey_lambda.value()) {
  require(lambda_ > 0.0 && lambda_ < 1.0, "Storey lambda must lie in (0, 1)");
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int k = 0; k < law_period(family); ++k) {
    const MarginalLaw law = coordinate_law(family, k);
    Cut c{};
    c.discrete = law.discrete();
    if (t_ <= 0.0) {
      c.reject = inf;
    } else if (t_ >= 1.0) {
      c.reject = -inf;
    } else {
      c.reject = law.upper_threshold(t);
    }
    c.storey = law.upper_threshold(storey_lambda);
    cuts_.push_back(c);
  }
  p0_ = null_rejection_probability(family, m, t);
}

bool ThresholdCounter::rejects(Count index, double value) const {
  const Cut& c = cut(index);
  return c.discrete ? value > c.reject : value >= c.reject;
}

MtpOutcome ThresholdCounter::operator()(const StatisticVector& stats) const {
  require(static_cast<Count>(stats.values.size()) == m_, "statistic vector has the wrong length");
  MtpOutcome out;
  out.m = m_;
  out.t = t_;
  Count above_lambda = 0;
  for (Count i = 0; i < m_; ++i) {
    const double v = stats.values[i];
    const Cut& c = cut(i);
    const bool reject = c.discrete ? v > c.reject : v >= c.reject;
    const bool large_p = c.discrete ? v <= c.storey : v < c.storey;
    if (stats.null_mask[i]) ++out.m0;
    if (reject) {
      ++out.R;
      if (stats.null_mask[i]) ++out.V;
    }
    if (large_p) ++above_lambda;
  }
  out.fdp = static_cast<double>(out.V) / static_cast<double>(std::max<Count>(out.R, 1));
  const double md = static_cast<double>(m_);
  double pi0 = static_cast<double>(above_lambda) / ((1.0 - lambda_) * md);
  if (pi0 <= 0.0) pi0 = 1.0 / ((1.0 - lambda_) * md);
  pi0 = std::min(pi0, 1.0);
  out.theta = theta_estimator(pi0, Probability(p0_), out.R, m_);
  return out;
}

// --- runners ------------------------------------------------------------------------

void parallel_for(Count n, unsigned threads, const std::function<void(Count)>& body) {
  const unsigned workers =
      static_cast<unsigned>(std::clamp<Count>(static_cast<Count>(threads), 1, std::max<Count>(n, 1)));
  if (workers <= 1) {
    for (Count i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Count i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<MtpOutcome> simulate(const DependenceDesign& design, Count replications,
                                 const RunOptions& opts, const Truncation& trunc) {
  require(replications >= 1, "simulate needs at least one replication");
  const VectorSampler sampler(design, trunc);
  const ThresholdCounter counter(design.family, design.m, Probability(opts.t),
                                 Probability(opts.storey_lambda));
  std::vector<MtpOutcome> out(static_cast<std::size_t>(replications));
  parallel_for(replications, opts.threads, [&](Count r) {
    StatisticVector v;
    sampler.sample_into(static_cast<std::uint64_t>(r), v);
    out[r] = counter(v);
  });
  return out;
}

Dispersion dispersion(std::span<const double> values) {
  Dispersion d;
  if (values.empty()) return d;
  CompensatedSum<double> sum;
  for (const double v : values) sum += v;
  d.mean = sum.value() / static_cast<double>(values.size());
  CompensatedSum<double> sq;
  for (const double v : values) {
    sq += (v - d.mean) * (v - d.mean);
    d.max_abs_dev = std::max(d.max_abs_dev, std::abs(v - d.mean));
  }
  if (values.size() > 1) d.sd = std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
  return d;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "log-log slope needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SllnTrace slln_sweep(const DesignTemplate& tmpl, std::span<const Count> m_grid,
                     Count replications, std::uint64_t seed, const RunOptions& opts,
                     const Truncation& trunc) {
  require(!m_grid.empty(), "sweep needs a non-empty m grid");
  for (std::size_t k = 1; k < m_grid.size(); ++k) {
    require(m_grid[k] > m_grid[k - 1], "sweep m grid must be strictly increasing");
  }
  require(replications >= 2, "sweep needs at least two replications");
  SllnTrace trace;
  std::vector<double> ms, sd_r, sd_v;
  for (const Count m : m_grid) {
    const DependenceDesign design = tmpl.instantiate(m, mix_seed(seed, static_cast<std::uint64_t>(m)));
    const auto outcomes = simulate(design, replications, opts, trunc);
    std::vector<double> r_rate, v_rate;
    for (const auto& o : outcomes) {
      r_rate.push_back(static_cast<double>(o.R) / static_cast<double>(o.m));
      if (o.m0 > 0) v_rate.push_back(static_cast<double>(o.V) / static_cast<double>(o.m0));
    }
    SllnRow row{m, design.m0(), design.block_size, dispersion(r_rate), dispersion(v_rate)};
    trace.rows.push_back(row);
    ms.push_back(static_cast<double>(m));
    sd_r.push_back(row.rejection_rate.sd);
    sd_v.push_back(row.false_rate.sd);
  }
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double s) { return s > 0.0; });
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool fit = ms.size() >= 2;
  trace.slope_rejection = fit && positive(sd_r) ? loglog_slope(ms, sd_r) : nan;
  trace.slope_false = fit && positive(sd_v) ? loglog_slope(ms, sd_v) : nan;
  return trace;
}

namespace {

double quantile_band(std::vector<double> v) {
  if (v.size() < 2) return 0.0;
  std::sort(v.begin(), v.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return at(0.975) - at(0.025);
}

}  // namespace

std::vector<WeakDependenceCurves> weak_dependence_curves(
    const DesignTemplate& tmpl, std::span<const Count> m_grid, std::span<const double> t_grid,
    Count replications, std::uint64_t seed, unsigned threads, const Truncation& trunc) {
  require(!m_grid.empty() && !t_grid.empty(), "curves need non-empty m and t grids");
  require(replications >= 1, "curves need at least one replication");
  std::vector<WeakDependenceCurves> out;
  for (const Count m : m_grid) {
    const DependenceDesign design = tmpl.instantiate(m, mix_seed(seed, static_cast<std::uint64_t>(m)));
    const VectorSampler sampler(design, trunc);
    std::vector<ThresholdCounter> counters;
    for (const double t : t_grid) counters.emplace_back(design.family, m, Probability(t));
    const std::size_t nt = t_grid.size();
    std::vector<double> g0(replications * nt), g1(replications * nt);
    const Count m0 = design.m0();
    parallel_for(replications, threads, [&](Count r) {
      const StatisticVector v = sampler(static_cast<std::uint64_t>(r));
      for (std::size_t k = 0; k < nt; ++k) {
        const MtpOutcome o = counters[k](v);
        g0[r * nt + k] = m0 > 0 ? static_cast<double>(o.V) / static_cast<double>(m0) : 0.0;
        g1[r * nt + k] = m0 < m ? static_cast<double>(o.R - o.V) / static_cast<double>(m - m0) : 0.0;
      }
    });
    WeakDependenceCurves curves{m, m0, {}};
    for (std::size_t k = 0; k < nt; ++k) {
      std::vector<double> a, b;
      for (Count r = 0; r < replications; ++r) {
        a.push_back(g0[r * nt + k]);
        b.push_back(g1[r * nt + k]);
      }
      CurvePoint pt;
      pt.t = t_grid[k];
      if (m0 > 0) {
        pt.g0 = dispersion(a);
        pt.g0_band = quantile_band(a);
      }
      if (m0 < m) {
        pt.g1 = dispersion(b);
        pt.g1_band = quantile_band(b);
      }
      curves.points.push_back(pt);
    }
    out.push_back(std::move(curves));
  }
  return out;
}

void write_outcomes_csv(std::ostream& os, std::span<const MtpOutcome> outcomes) {
  os << "m,replication,R,V,fdp,theta\n";
  char buf[64];
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const MtpOutcome& o = outcomes[r];
    os << o.m << ',' << r << ',' << o.R << ',' << o.V << ',';
    std::snprintf(buf, sizeof buf, "%.17g", o.fdp);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", o.theta);
    os << buf << '\n';
  }
}

}  // namespace lancaster
