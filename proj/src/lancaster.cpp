#include "lancaster/lancaster.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lancaster/errors.hpp"
#include "lancaster/orthopoly.hpp"
#include "lancaster/quadrature.hpp"
#include "lancaster/summation.hpp"

namespace lancaster {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Count as_count(double x) {
  if (!(x >= 0.0) || std::floor(x) != x) {
    throw std::domain_error("discrete coordinate must be a non-negative integer");
  }
  return static_cast<Count>(x);
}

double positive(double y) {
  if (!(y > 0.0)) throw std::domain_error("gamma coordinate must be > 0");
  return y;
}

}  // namespace

std::string family_name(const FamilyParams& family) {
  return std::visit(overloaded{[](const GammaFamily&) { return "gamma"; },
                               [](const PoissonFamily&) { return "poisson"; },
                               [](const NegBinomialFamily&) { return "nb"; },
                               [](const GammaNBFamily&) { return "gamma-nb"; }},
                    family);
}

double rho_upper_limit(const FamilyParams& family) {
  if (const auto* g = std::get_if<GammaNBFamily>(&family)) return std::sqrt(g->nb.c());
  return 1.0;
}

bool rho_limit_inclusive(const FamilyParams& family) {
  return std::holds_alternative<PoissonFamily>(family) ||
         std::holds_alternative<GammaNBFamily>(family);
}

bool rho_admissible(const FamilyParams& family, double rho) {
  if (!(rho >= 0.0)) return false;
  const double limit = rho_upper_limit(family);
  return rho_limit_inclusive(family) ? rho <= limit : rho < limit;
}

// --- marginal laws --------------------------------------------------------------

double MarginalLaw::log_pdf(double x) const {
  return std::visit(
      overloaded{[&](const GammaParams& p) { return gamma_log_pdf(positive(x), p); },
                 [&](const PoissonParams& p) { return poisson_log_pmf(as_count(x), p); },
                 [&](const NBParams& p) { return nb_log_pmf(as_count(x), p); }},
      params_);
}

double MarginalLaw::pdf(double x) const {
  return std::visit(
      overloaded{[&](const GammaParams& p) { return gamma_pdf(positive(x), p); },
                 [&](const PoissonParams& p) { return poisson_pmf(as_count(x), p); },
                 [&](const NBParams& p) { return nb_pmf(as_count(x), p); }},
      params_);
}

double MarginalLaw::cdf(double x) const {
  return std::visit(
      overloaded{[&](const GammaParams& p) { return gamma_cdf(x, p); },
                 [&](const PoissonParams& p) {
                   return poisson_cdf(static_cast<Count>(std::floor(x)), p);
                 },
                 [&](const NBParams& p) {
                   return nb_cdf(static_cast<Count>(std::floor(x)), p);
                 }},
      params_);
}

double MarginalLaw::sf(double x) const {
  return std::visit(
      overloaded{[&](const GammaParams& p) { return gamma_sf(x, p); },
                 [&](const PoissonParams& p) {
                   return poisson_sf(static_cast<Count>(std::floor(x)), p);
                 },
                 [&](const NBParams& p) {
                   return nb_sf(static_cast<Count>(std::floor(x)), p);
                 }},
      params_);
}

double MarginalLaw::upper_threshold(Probability t) const {
  return std::visit(
      overloaded{[&](const GammaParams& p) { return gamma_upper_quantile(t, p); },
                 [&](const PoissonParams& p) {
                   return static_cast<double>(poisson_upper_threshold(t, p));
                 },
                 [&](const NBParams& p) {
                   return static_cast<double>(nb_upper_threshold(t, p));
                 }},
      params_);
}

double MarginalLaw::rejection_probability(Probability t) const {
  if (t.value() <= 0.0) return 0.0;
  if (t.value() >= 1.0) return 1.0;
  if (!discrete()) return t.value();
  return sf(upper_threshold(t));
}

double MarginalLaw::tail_cut(double mass) const {
  if (!discrete()) return gamma_upper_quantile(Probability(mass), std::get<GammaParams>(params_));
  return upper_threshold(Probability(mass)) + 1.0;
}

MarginalLaw marginal_law(const FamilyParams& family, Coordinate coordinate) {
  return std::visit(
      overloaded{[](const GammaFamily& f) { return MarginalLaw(f.params); },
                 [](const PoissonFamily& f) { return MarginalLaw(f.params); },
                 [](const NegBinomialFamily& f) { return MarginalLaw(f.params); },
                 [&](const GammaNBFamily& f) {
                   return coordinate == Coordinate::first ? MarginalLaw(f.nb)
                                                          : MarginalLaw(f.gamma);
                 }},
      family);
}

double marginal(const FamilyParams& family, Coordinate coordinate, double x) {
  return marginal_law(family, coordinate).pdf(x);
}

// --- pair and truncation -------------------------------------------------------

LancasterPair::LancasterPair(FamilyParams family, double rho)
    : family_(std::move(family)), rho_(rho) {
  if (!rho_admissible(family_, rho)) {
    throw std::domain_error("canonical correlation outside the range of the " +
                            family_name(family_) + " family");
  }
}

void Truncation::validate() const {
  if (n_max < 1) throw std::domain_error("truncation n_max must be >= 1");
  if (n_max > kMaxPolyOrder) throw std::domain_error("truncation n_max exceeds 10000");
  if (!(tail_tol > 0.0)) throw std::domain_error("truncation tail_tol must be > 0");
}

namespace {

template <typename RowX, typename RowY>
SeriesValue kernel_series(double log_prefactor, double rho, RowX& phi, RowY& psi,
                          const Truncation& trunc) {
  trunc.validate();
  const double log_rho = rho > 0.0 ? std::log(rho) : -INFINITY;
  CompensatedSum<double> sum;
  int small_run = 0;
  double last = 0.0;
  for (int n = 0; n <= trunc.n_max; ++n) {
    const LogValue px = phi(n);
    const LogValue py = psi(n);
    double term = 0.0;
    if (n == 0 || rho > 0.0) {
      const double weight = n == 0 ? 0.0 : n * log_rho;
      const LogValue product = px * py;
      if (!product.is_zero()) {
        term = product.sign * std::exp(weight + product.log_abs + log_prefactor);
      }
    }
    sum += term;
    last = std::abs(term);
    small_run = (n > 0 && last < trunc.tail_tol) ? small_run + 1 : 0;
    if (small_run >= 3) return {sum.value(), last, n + 1};
  }
  throw NonConvergenceError("canonical series did not reach the tail tolerance by n_max",
                            trunc.n_max);
}

}  // namespace

SeriesValue joint_density(const LancasterPair& pair, double x, double y,
                          const Truncation& trunc) {
  const double rho = pair.rho();
  return std::visit(
      overloaded{
          [&](const GammaFamily& f) {
            const double a = f.params.alpha();
            GammaBasisRow px(a, positive(x));
            GammaBasisRow py(a, positive(y));
            const double lf = gamma_log_pdf(x, f.params) + gamma_log_pdf(y, f.params);
            return kernel_series(lf, rho, px, py, trunc);
          },
          [&](const PoissonFamily& f) {
            if (rho >= 1.0) {
              throw std::domain_error("Poisson rho = 1 has no pointwise density series");
            }
            const Count xi = as_count(x);
            const Count yi = as_count(y);
            CharlierRow px(f.params.mean(), xi);
            CharlierRow py(f.params.mean(), yi);
            const double lf = poisson_log_pmf(xi, f.params) + poisson_log_pmf(yi, f.params);
            return kernel_series(lf, rho, px, py, trunc);
          },
          [&](const NegBinomialFamily& f) {
            const Count xi = as_count(x);
            const Count yi = as_count(y);
            const NBParams& p = f.params;
            MeixnerRow px(p.beta(), p.c(), xi);
            MeixnerRow py(p.beta(), p.c(), yi);
            const double lf = nb_log_pmf(xi, p) + nb_log_pmf(yi, p);
            return kernel_series(lf, rho, px, py, trunc);
          },
          [&](const GammaNBFamily& f) {
            const Count xi = as_count(x);
            MeixnerRow px(f.nb.beta(), f.nb.c(), xi);
            GammaBasisRow py(f.gamma.alpha(), positive(y));
            const double lf = nb_log_pmf(xi, f.nb) + gamma_log_pdf(y, f.gamma);
            return kernel_series(lf, rho, px, py, trunc);
          }},
      pair.family());
}

namespace {

template <typename Row>
Eigen::MatrixXd accumulate_table(std::vector<Row>& rows_x, std::vector<Row>& rows_y,
                                 const Eigen::VectorXd& log_fx,
                                 const Eigen::VectorXd& log_fy, double rho,
                                 const Truncation& trunc) {
  trunc.validate();
  const Eigen::Index nx = log_fx.size();
  const Eigen::Index ny = log_fy.size();
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(nx, ny);
  Eigen::MatrixXd compensation = Eigen::MatrixXd::Zero(nx, ny);
  Eigen::VectorXd u(nx);
  Eigen::VectorXd v(ny);
  const double log_rho = rho > 0.0 ? std::log(rho) : -INFINITY;
  int small_run = 0;
  for (int n = 0; n <= trunc.n_max; ++n) {
    if (n > 0 && rho == 0.0) return table;
    // Split rho^n evenly between the two factors; keeps u v^T symmetric
    // when the rows coincide.
    const double half = n == 0 ? 0.0 : 0.5 * n * log_rho;
    for (Eigen::Index i = 0; i < nx; ++i) {
      const LogValue p = rows_x[i](n);
      u(i) = p.is_zero() ? 0.0 : p.sign * std::exp(p.log_abs + log_fx(i) + half);
    }
    for (Eigen::Index j = 0; j < ny; ++j) {
      const LogValue p = rows_y[j](n);
      v(j) = p.is_zero() ? 0.0 : p.sign * std::exp(p.log_abs + log_fy(j) + half);
    }
    const Eigen::MatrixXd term = u * v.transpose();
    // Compensated accumulation, elementwise.
    const Eigen::MatrixXd y = term - compensation;
    const Eigen::MatrixXd t = table + y;
    compensation = (t - table) - y;
    table = t;
    const double largest = term.cwiseAbs().maxCoeff();
    small_run = (n > 0 && largest < trunc.tail_tol) ? small_run + 1 : 0;
    if (small_run >= 3) return table;
  }
  throw NonConvergenceError("joint table series did not converge by n_max", trunc.n_max);
}

}  // namespace

Eigen::MatrixXd joint_table(const LancasterPair& pair, const Truncation& trunc,
                            Count x_cut, Count y_cut) {
  if (x_cut < 0 || y_cut < 0) throw std::domain_error("table cuts must be >= 0");
  auto log_pmfs = [](const MarginalLaw& law, Count cut) {
    Eigen::VectorXd out(cut + 1);
    for (Count x = 0; x <= cut; ++x) out(x) = law.log_pdf(static_cast<double>(x));
    return out;
  };
  const MarginalLaw law_x = marginal_law(pair.family(), Coordinate::first);
  const MarginalLaw law_y = marginal_law(pair.family(), Coordinate::second);
  const Eigen::VectorXd lfx = log_pmfs(law_x, x_cut);
  const Eigen::VectorXd lfy = log_pmfs(law_y, y_cut);
  if (const auto* p = std::get_if<PoissonFamily>(&pair.family())) {
    if (pair.rho() >= 1.0) {
      throw std::domain_error("Poisson rho = 1 has no pointwise density series");
    }
    std::vector<CharlierRow> rx, ry;
    for (Count x = 0; x <= x_cut; ++x) rx.emplace_back(p->params.mean(), x);
    for (Count y = 0; y <= y_cut; ++y) ry.emplace_back(p->params.mean(), y);
    return accumulate_table(rx, ry, lfx, lfy, pair.rho(), trunc);
  }
  if (const auto* nb = std::get_if<NegBinomialFamily>(&pair.family())) {
    std::vector<MeixnerRow> rx, ry;
    for (Count x = 0; x <= x_cut; ++x) rx.emplace_back(nb->params.beta(), nb->params.c(), x);
    for (Count y = 0; y <= y_cut; ++y) ry.emplace_back(nb->params.beta(), nb->params.c(), y);
    return accumulate_table(rx, ry, lfx, lfy, pair.rho(), trunc);
  }
  throw std::domain_error("joint_table needs integer coordinates (Poisson or NB)");
}

double grid_mass(const LancasterPair& pair, const Truncation& trunc, double x_cut,
                 double y_cut) {
  const FamilyParams& family = pair.family();
  if (std::holds_alternative<PoissonFamily>(family) ||
      std::holds_alternative<NegBinomialFamily>(family)) {
    return joint_table(pair, trunc, as_count(std::floor(x_cut)),
                       as_count(std::floor(y_cut)))
        .sum();
  }
  quad::Options opts{1e-11, 1e-10, 4000};
  if (const auto* g = std::get_if<GammaFamily>(&family)) {
    const double a = g->params.alpha();
    auto outer = [&](double x) {
      auto inner = [&](double y) { return joint_density(pair, x, y, trunc).value; };
      return quad::integrate_power_singular(inner, a, y_cut, opts).value;
    };
    return quad::integrate_power_singular(outer, a, x_cut, opts).value;
  }
  const auto& gnb = std::get<GammaNBFamily>(family);
  CompensatedSum<double> total;
  for (Count x = 0; x <= as_count(std::floor(x_cut)); ++x) {
    auto inner = [&](double y) {
      return joint_density(pair, static_cast<double>(x), y, trunc).value;
    };
    total += quad::integrate_power_singular(inner, gnb.gamma.alpha(), y_cut, opts).value;
  }
  return total.value();
}

}  // namespace lancaster
