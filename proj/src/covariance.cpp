#include "lancaster/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lancaster/errors.hpp"
#include "lancaster/orthopoly.hpp"
#include "lancaster/quadrature.hpp"
#include "lancaster/summation.hpp"

namespace lancaster {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

void require_rho(double rho, double limit, bool inclusive) {
  const bool ok = rho >= 0.0 && (inclusive ? rho <= limit : rho < limit);
  require(ok, "canonical correlation outside the family range");
}

// sum_{n>=1} rho^n w_n with log|w_n| and sign from `weight(n)`. Stops after
// three consecutive terms below tail_tol once the geometric remainder
// certificate |term| rho / (1 - rho) is also below tail_tol.
template <typename Weight>
KappaResult kappa_series(double rho, Weight&& weight, const Truncation& trunc) {
  trunc.validate();
  if (rho == 0.0) return {0.0, 0, 0.0};
  const double log_rho = std::log(rho);
  const double geometric = rho / (1.0 - rho);
  auto term_at = [&](int n) {
    const LogValue w = weight(n);
    return w.is_zero() ? 0.0 : w.sign * std::exp(n * log_rho + w.log_abs);
  };
  CompensatedSum<double> sum;
  int small_run = 0;
  for (int n = 1; n <= trunc.n_max; ++n) {
    const double term = term_at(n);
    sum += term;
    const double mag = std::abs(term);
    small_run = mag < trunc.tail_tol ? small_run + 1 : 0;
    if (small_run >= 3 && mag * geometric < trunc.tail_tol) {
      const double next = n < kMaxPolyOrder ? std::abs(term_at(n + 1)) : mag;
      return {sum.value(), n, next};
    }
  }
  throw NonConvergenceError("kappa series did not reach the tail tolerance by n_max",
                            trunc.n_max);
}

// log of the gamma-side partial integral int_0^tau f(y; alpha) L_n^(alpha-1)(y) dy
// = tau^alpha e^-tau L_{n-1}^(alpha)(tau) / (n Gamma(alpha)), for n >= 1.
// Advances the caller's recurrence for L^(alpha)(tau) to degree n - 1.
template <typename Recurrence>
LogValue gamma_partial(int n, double alpha, double tau, Recurrence& laguerre_alpha) {
  const LogValue l = laguerre_alpha.advance_to(n - 1).to_log();
  const double prefactor =
      alpha * std::log(tau) - tau - std::log(static_cast<double>(n)) - log_gamma(alpha);
  return l * LogValue{prefactor, 1};
}

// q_n = sum_{x=0}^{x0} f(x) phi_n(x) for the discrete families.
template <typename Row>
class DiscretePartialSums {
 public:
  DiscretePartialSums(std::vector<Row> rows, std::vector<double> log_pmf)
      : rows_(std::move(rows)), log_pmf_(std::move(log_pmf)) {}

  LogValue operator()(int n) {
    CompensatedSum<double> sum;
    for (std::size_t x = 0; x < rows_.size(); ++x) {
      const LogValue phi = rows_[x](n);
      if (!phi.is_zero()) sum += phi.sign * std::exp(phi.log_abs + log_pmf_[x]);
    }
    return LogValue::from(sum.value());
  }

 private:
  std::vector<Row> rows_;
  std::vector<double> log_pmf_;
};

DiscretePartialSums<CharlierRow> poisson_partials(const PoissonParams& p, Count x0) {
  std::vector<CharlierRow> rows;
  std::vector<double> lp;
  for (Count x = 0; x <= x0; ++x) {
    rows.emplace_back(p.mean(), x);
    lp.push_back(poisson_log_pmf(x, p));
  }
  return {std::move(rows), std::move(lp)};
}

DiscretePartialSums<MeixnerRow> nb_partials(const NBParams& p, Count x0) {
  std::vector<MeixnerRow> rows;
  std::vector<double> lp;
  for (Count x = 0; x <= x0; ++x) {
    rows.emplace_back(p.beta(), p.c(), x);
    lp.push_back(nb_log_pmf(x, p));
  }
  return {std::move(rows), std::move(lp)};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_open_t(Probability t) {
  require(t.value() > 0.0 && t.value() < 1.0, "kappa requires 0 < t < 1");
}

}  // namespace

PairClass classify_pair(double rho_ij) {
  return std::abs(rho_ij) == 1.0 ? PairClass::E1 : PairClass::E2;
}

double laguerre_partial_integral(int n, double alpha, double y) {
  require(n >= 1, "partial integral requires n >= 1");
  require(alpha > -1.0, "partial integral requires alpha > -1");
  require(y > 0.0, "partial integral requires y > 0");
  const LogValue l = laguerre(PolyOrder(n - 1), alpha + 1.0, y).log_form;
  const double prefactor = (alpha + 1.0) * std::log(y) - y - std::log(static_cast<double>(n));
  return (l * LogValue{prefactor, 1}).value();
}

KappaResult kappa_gamma(const GammaParams& gamma, double rho, Probability t,
                        const Truncation& trunc, KappaOptions opts) {
  require_open_t(t);
  require_rho(rho, 1.0, false);
  require(gamma.in_comparison_range() || opts.allow_alpha_above_one,
          "kappa_gamma covers alpha in (0, 1]; set allow_alpha_above_one to explore");
  const double alpha = gamma.alpha();
  const double tau = gamma_upper_quantile(t, gamma);
  auto recurrence = laguerre_recurrence<double>(alpha, tau);
  // rho^n n! Gamma(alpha) / Gamma(alpha+n) q_n^2, with q_n the partial integral.
  auto weight = [&](int n) {
    const LogValue q = gamma_partial(n, alpha, tau, recurrence);
    const double log_norm = 2.0 * gamma_basis_log_norm(n, alpha);
    return q * q * LogValue{log_norm, 1};
  };
  return kappa_series(rho, weight, trunc);
}

KappaResult kappa_poisson(const PoissonParams& poisson, double rho, Probability t,
                          const Truncation& trunc) {
  require_open_t(t);
  require_rho(rho, 1.0, false);
  const Count x0 = poisson_upper_threshold(t, poisson);
  if (x0 < 0) return {0.0, 0, 0.0};
  auto q = poisson_partials(poisson, x0);
  auto weight = [&](int n) {
    const LogValue v = q(n);
    return v * v;
  };
  return kappa_series(rho, weight, trunc);
}

KappaResult kappa_nb(const NBParams& nb, double rho, Probability t,
                     const Truncation& trunc) {
  require_open_t(t);
  require_rho(rho, 1.0, false);
  const Count x0 = nb_upper_threshold(t, nb);
  if (x0 < 0) return {0.0, 0, 0.0};
  auto q = nb_partials(nb, x0);
  auto weight = [&](int n) {
    const LogValue v = q(n);
    return v * v;
  };
  return kappa_series(rho, weight, trunc);
}

KappaResult kappa_gamma_nb(const GammaParams& gamma, const NBParams& nb, double rho,
                           Probability t, const Truncation& trunc) {
  require_open_t(t);
  require_rho(rho, std::sqrt(nb.c()), true);
  const Count x0 = nb_upper_threshold(t, nb);
  if (x0 < 0) return {0.0, 0, 0.0};
  const double alpha = gamma.alpha();
  const double tau = gamma_upper_quantile(t, gamma);
  auto q = nb_partials(nb, x0);
  auto recurrence = laguerre_recurrence<double>(alpha, tau);
  auto weight = [&](int n) {
    const LogValue r = gamma_partial(n, alpha, tau, recurrence) *
                       LogValue{gamma_basis_log_norm(n, alpha), 1};
    return q(n) * r;
  };
  return kappa_series(rho, weight, trunc);
}

KappaResult kappa(const LancasterPair& pair, Probability t, const Truncation& trunc,
                  KappaOptions opts) {
  const double rho = pair.rho();
  return std::visit(
      overloaded{
          [&](const GammaFamily& f) { return kappa_gamma(f.params, rho, t, trunc, opts); },
          [&](const PoissonFamily& f) { return kappa_poisson(f.params, rho, t, trunc); },
          [&](const NegBinomialFamily& f) { return kappa_nb(f.params, rho, t, trunc); },
          [&](const GammaNBFamily& f) {
            return kappa_gamma_nb(f.gamma, f.nb, rho, t, trunc);
          }},
      pair.family());
}

double kappa_oracle(const LancasterPair& pair, Probability t, const OracleSpec& spec) {
  require_open_t(t);
  const MarginalLaw law_x = marginal_law(pair.family(), Coordinate::first);
  const MarginalLaw law_y = marginal_law(pair.family(), Coordinate::second);
  const double a = law_x.upper_threshold(t);
  const double b = law_y.upper_threshold(t);
  if (a < 0.0 || b < 0.0) return 0.0;
  const double independent = law_x.cdf(a) * law_y.cdf(b);
  const quad::Options opts{spec.abs_tol, spec.rel_tol, 4000};
  auto density = [&](double x, double y) {
    return joint_density(pair, x, y, spec.trunc).value;
  };

  CompensatedSum<double> joint;
  if (law_x.discrete() && law_y.discrete()) {
    for (Count x = 0; x <= static_cast<Count>(a); ++x) {
      for (Count y = 0; y <= static_cast<Count>(b); ++y) {
        joint += density(static_cast<double>(x), static_cast<double>(y));
      }
    }
  } else if (law_x.discrete()) {
    const double alpha = std::get<GammaParams>(law_y.params()).alpha();
    for (Count x = 0; x <= static_cast<Count>(a); ++x) {
      auto inner = [&](double y) { return density(static_cast<double>(x), y); };
      joint += quad::integrate_power_singular(inner, alpha, b, opts).value;
    }
  } else {
    const double alpha = std::get<GammaParams>(law_x.params()).alpha();
    auto outer = [&](double x) {
      auto inner = [&](double y) { return density(x, y); };
      return quad::integrate_power_singular(inner, alpha, b, opts).value;
    };
    joint += quad::integrate_power_singular(outer, alpha, a, opts).value;
  }
  return joint.value() - independent;
}

std::vector<double> default_rho_grid(const FamilyParams& family, double step,
                                     double rho_max) {
  require(step > 0.0, "rho grid step must be > 0");
  const double limit = std::min(rho_max, rho_upper_limit(family));
  std::vector<double> grid;
  for (int k = 1;; ++k) {
    const double rho = std::round(k * step * 1e12) / 1e12;
    if (rho > limit + 1e-12) break;
    if (!rho_admissible(family, rho) || classify_pair(rho) == PairClass::E1) break;
    grid.push_back(rho);
  }
  if (grid.empty() || grid.back() < limit - 1e-12) {
    if (rho_admissible(family, limit) && classify_pair(limit) == PairClass::E2) {
      grid.push_back(limit);
    }
  }
  return grid;
}

ComparisonConstant comparison_constant(const FamilyParams& family, Probability t,
                                       std::span<const double> rho_grid,
                                       const Truncation& trunc, KappaOptions opts) {
  require(!rho_grid.empty(), "comparison constant needs a non-empty rho grid");
  ComparisonConstant out;
  for (const double rho : rho_grid) {
    require(rho > 0.0, "comparison grid points must be > 0");
    const double k = kappa(LancasterPair(family, rho), t, trunc, opts).value;
    const double ratio = std::abs(k) / rho;
    out.rho.push_back(rho);
    out.kappa.push_back(k);
    out.ratio.push_back(ratio);
    if (ratio > out.value) {
      out.value = ratio;
      out.argmax_rho = rho;
    }
  }
  return out;
}

double comparison_constant_for(const FamilyParams& family, Probability t,
                               std::span<const double> extra_rho,
                               const Truncation& trunc, KappaOptions opts) {
  std::set<double> points;
  for (const double r : default_rho_grid(family)) points.insert(r);
  for (const double r : extra_rho) {
    if (r > 0.0) points.insert(r);
  }
  const std::vector<double> grid(points.begin(), points.end());
  return comparison_constant(family, t, grid, trunc, opts).value;
}

namespace {

double max_indicator_variance(const FamilyParams& family, Probability t) {
  double best = 0.0;
  for (const auto coordinate : {Coordinate::first, Coordinate::second}) {
    const double s = marginal_law(family, coordinate).rejection_probability(t);
    best = std::max(best, s * (1.0 - s));
  }
  return best;
}

}  // namespace

VarianceBound variance_bound(const Eigen::MatrixXd& R, const FamilyParams& family,
                             Probability t, const Truncation& trunc, KappaOptions opts) {
  require(R.rows() == R.cols() && R.rows() > 0, "correlation matrix must be square");
  const Eigen::Index m = R.rows();
  std::set<double> e2_values;
  for (Eigen::Index i = 0; i < m; ++i) {
    require(R(i, i) == 1.0, "correlation matrix needs a unit diagonal");
    for (Eigen::Index j = 0; j < m; ++j) {
      const double r = R(i, j);
      require(r >= -1.0 && r <= 1.0, "correlation entries must lie in [-1, 1]");
      require(r == R(j, i), "correlation matrix must be symmetric");
      if (i != j && classify_pair(r) == PairClass::E2 && r != 0.0) {
        e2_values.insert(std::abs(r));
      }
    }
  }
  for (const double r : e2_values) {
    require(rho_admissible(family, r), "E2 correlation outside the family range");
  }
  VarianceBound out;
  const std::vector<double> extra(e2_values.begin(), e2_values.end());
  out.constant = e2_values.empty() ? 0.0 : comparison_constant_for(family, t, extra, trunc, opts);
  CompensatedSum<double> e2;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      if (classify_pair(R(i, j)) == PairClass::E1) {
        ++out.e1_pairs;
      } else if (R(i, j) != 0.0) {
        ++out.e2_pairs;
        e2 += out.constant * std::abs(R(i, j));
      }
    }
  }
  const double md = static_cast<double>(m);
  out.independent_part = max_indicator_variance(family, t) / md;
  out.e2_part = e2.value() / (md * md);
  out.e1_part = 0.25 * static_cast<double>(out.e1_pairs) / (md * md);
  out.value = out.independent_part + out.e2_part + out.e1_part;
  return out;
}

VarianceBound variance_bound(const DependenceDesign& design, Probability t,
                             double comparison) {
  design.validate();
  VarianceBound out;
  out.constant = comparison;
  const Count ordered_pairs = design.within_block_pairs();
  const double md = static_cast<double>(design.m);
  out.independent_part = max_indicator_variance(design.family, t) / md;
  if (design.rho == 0.0) {
    // blocks of independent coordinates
  } else if (classify_pair(design.rho) == PairClass::E1) {
    out.e1_pairs = ordered_pairs;
    out.e1_part = 0.25 * static_cast<double>(ordered_pairs) / (md * md);
  } else {
    out.e2_pairs = ordered_pairs;
    out.e2_part = comparison * design.rho * static_cast<double>(ordered_pairs) / (md * md);
  }
  out.value = out.independent_part + out.e2_part + out.e1_part;
  return out;
}

VarianceBound variance_bound(const DependenceDesign& design, Probability t,
                             const Truncation& trunc, KappaOptions opts) {
  design.validate();
  double comparison = 0.0;
  if (design.rho > 0.0 && classify_pair(design.rho) == PairClass::E2) {
    const double extra[] = {design.rho};
    comparison = comparison_constant_for(design.family, t, extra, trunc, opts);
  }
  return variance_bound(design, t, comparison);
}

std::vector<double> lyons_partial_sums(std::span<const double> varseq) {
  std::vector<double> sums;
  sums.reserve(varseq.size());
  CompensatedSum<double> acc;
  for (std::size_t k = 0; k < varseq.size(); ++k) {
    require(varseq[k] >= 0.0 && varseq[k] <= 1.0, "E|Q_N|^2 values must lie in [0, 1]");
    acc += varseq[k] / static_cast<double>(k + 1);
    sums.push_back(acc.value());
  }
  return sums;
}

double lyons_majorant(double scale, double delta) {
  require(scale >= 0.0, "majorant scale must be >= 0");
  require(delta > 0.0, "majorant needs delta > 0");
  return scale * std::riemann_zeta(1.0 + delta);
}

}  // namespace lancaster
