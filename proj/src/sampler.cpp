#include "lancaster/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "lancaster/errors.hpp"
#include "lancaster/orthopoly.hpp"
#include "lancaster/summation.hpp"

namespace lancaster {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

constexpr double kGridTailMass = 1e-10;
constexpr double kClipLimit = 1e-6;
constexpr std::uint64_t kLayoutStream = 0xFFFFFFFFu;

// Kibble gammas sharing the latent driver: every pair is a Kibble pair with
// correlation rho and common shape.
void kibble_block(double shape, double rho, Rng& rng, double* out, Count size) {
  if (rho == 0.0) {
    for (Count i = 0; i < size; ++i) out[i] = draw_gamma(shape, rng);
    return;
  }
  const double w = draw_gamma(shape, rng);
  const Count k = draw_poisson(rho * w / (1.0 - rho), rng);
  for (Count i = 0; i < size; ++i) {
    out[i] = (1.0 - rho) * draw_gamma(shape + static_cast<double>(k), rng);
  }
}

double nb_mixing_scale(const NBParams& p) { return p.c() / (1.0 - p.c()); }

}  // namespace

double draw_gamma(double shape, Rng& rng) {
  std::gamma_distribution<double> d(shape, 1.0);
  return d(rng);
}

Count draw_poisson(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<Count> d(mean);
  return d(rng);
}

Count draw_nb(double beta, double c, Rng& rng) {
  return draw_poisson(draw_gamma(beta, rng) * c / (1.0 - c), rng);
}

std::pair<double, double> sample_pair_gamma(const GammaParams& p, double rho, Rng& rng) {
  require(rho >= 0.0 && rho < 1.0, "gamma pair needs 0 <= rho < 1");
  double xy[2];
  kibble_block(p.alpha(), rho, rng, xy, 2);
  return {xy[0], xy[1]};
}

std::pair<Count, Count> sample_pair_poisson(const PoissonParams& p, double rho, Rng& rng) {
  require(rho >= 0.0 && rho <= 1.0, "Poisson pair needs 0 <= rho <= 1");
  const double a = p.mean();
  const Count w = draw_poisson(rho * a, rng);
  const Count u = draw_poisson((1.0 - rho) * a, rng);
  const Count v = draw_poisson((1.0 - rho) * a, rng);
  return {u + w, v + w};
}

std::pair<Count, Count> sample_pair_nb_shared(const NBParams& p, double rho, Rng& rng) {
  require(rho >= 0.0 && rho <= p.c(), "shared-gamma NB pair needs 0 <= rho <= c");
  const double r = rho / p.c();
  const double beta = p.beta();
  const double a = r > 0.0 ? draw_gamma(beta * r, rng) : 0.0;
  const double b1 = r < 1.0 ? draw_gamma(beta * (1.0 - r), rng) : 0.0;
  const double b2 = r < 1.0 ? draw_gamma(beta * (1.0 - r), rng) : 0.0;
  const double scale = nb_mixing_scale(p);
  return {draw_poisson((a + b1) * scale, rng), draw_poisson((a + b2) * scale, rng)};
}

std::pair<Count, Count> sample_pair_nb(const NBParams& p, double rho, Rng& rng) {
  require(rho >= 0.0 && rho < p.c(), "exact NB pair needs 0 <= rho < c");
  double g[2];
  kibble_block(p.beta(), rho / p.c(), rng, g, 2);
  const double scale = nb_mixing_scale(p);
  return {draw_poisson(g[0] * scale, rng), draw_poisson(g[1] * scale, rng)};
}

std::pair<double, double> sample_pair_gamma_nb(const GammaParams& g, const NBParams& nb,
                                               double rho, Rng& rng) {
  require(g.alpha() == nb.beta(), "mixture gamma-NB pair needs alpha = beta");
  const double root_c = std::sqrt(nb.c());
  require(rho >= 0.0 && rho <= root_c, "gamma-NB pair needs 0 <= rho <= sqrt(c)");
  const double rho_g = rho / root_c;
  double latent[2];
  if (rho_g >= 1.0) {
    latent[0] = latent[1] = draw_gamma(g.alpha(), rng);
  } else {
    kibble_block(g.alpha(), rho_g, rng, latent, 2);
  }
  const double x = static_cast<double>(draw_poisson(latent[0] * nb_mixing_scale(nb), rng));
  return {x, latent[1]};
}

// --- grid sampler ------------------------------------------------------------------

namespace {

// Partial integral of the Gamma(alpha) density against phi_n over [0, e].
class GammaBinIntegrals {
 public:
  GammaBinIntegrals(double alpha, const std::vector<double>& edges) : alpha_(alpha) {
    for (const double e : edges) {
      finite_.push_back(std::isfinite(e) && e > 0.0);
      edges_.push_back(e);
      recurrences_.push_back(laguerre_recurrence<double>(alpha, finite_.back() ? e : 1.0));
    }
  }

  // Q_n(e_k) for every edge, rho^(n/2) included.
  std::vector<double> row(int n, double half_log_rho) {
    std::vector<double> out(edges_.size(), 0.0);
    const GammaParams gp(alpha_);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const double e = edges_[k];
      if (n == 0) {
        out[k] = e <= 0.0 ? 0.0 : (std::isfinite(e) ? gamma_cdf(e, gp) : 1.0);
        continue;
      }
      if (!finite_[k]) continue;
      const LogValue l = recurrences_[k].advance_to(n - 1).to_log();
      if (l.is_zero()) continue;
      const double log_abs = l.log_abs + alpha_ * std::log(e) - e -
                             std::log(static_cast<double>(n)) - log_gamma(alpha_) +
                             gamma_basis_log_norm(n, alpha_) + half_log_rho;
      out[k] = l.sign * std::exp(log_abs);
    }
    return out;
  }

 private:
  double alpha_;
  std::vector<double> edges_;
  std::vector<bool> finite_;
  std::vector<decltype(laguerre_recurrence<double>(0.0, 0.0))> recurrences_;
};

template <typename Row>
Eigen::MatrixXd gamma_nb_table(const GammaNBFamily& f, double rho, Count x_cut,
                               const std::vector<double>& edges, const Truncation& trunc) {
  trunc.validate();
  const Eigen::Index nx = x_cut + 1;
  const Eigen::Index nb = static_cast<Eigen::Index>(edges.size()) - 1;
  std::vector<Row> rows;
  Eigen::VectorXd log_fx(nx);
  for (Count x = 0; x < nx; ++x) {
    rows.emplace_back(f.nb.beta(), f.nb.c(), x);
    log_fx(x) = nb_log_pmf(x, f.nb);
  }
  GammaBinIntegrals bins(f.gamma.alpha(), edges);
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(nx, nb);
  Eigen::MatrixXd compensation = Eigen::MatrixXd::Zero(nx, nb);
  Eigen::VectorXd u(nx);
  Eigen::VectorXd v(nb);
  const double log_rho = rho > 0.0 ? std::log(rho) : -INFINITY;
  int small_run = 0;
  for (int n = 0; n <= trunc.n_max; ++n) {
    if (n > 0 && rho == 0.0) return table;
    const double half = n == 0 ? 0.0 : 0.5 * n * log_rho;
    for (Eigen::Index i = 0; i < nx; ++i) {
      const LogValue p = rows[i](n);
      u(i) = p.is_zero() ? 0.0 : p.sign * std::exp(p.log_abs + log_fx(i) + half);
    }
    const std::vector<double> q = bins.row(n, half);
    for (Eigen::Index k = 0; k < nb; ++k) v(k) = q[k + 1] - q[k];
    const Eigen::MatrixXd term = u * v.transpose();
    const Eigen::MatrixXd y = term - compensation;
    const Eigen::MatrixXd t = table + y;
    compensation = (t - table) - y;
    table = t;
    const double largest = term.cwiseAbs().maxCoeff();
    small_run = (n > 0 && largest < trunc.tail_tol) ? small_run + 1 : 0;
    if (small_run >= 3) return table;
  }
  throw NonConvergenceError("gamma-NB bin table did not converge by n_max", trunc.n_max);
}

Count discrete_cut(const MarginalLaw& law) {
  return static_cast<Count>(law.tail_cut(kGridTailMass));
}

}  // namespace

GridPairSampler::GridPairSampler(const LancasterPair& pair, const Truncation& trunc,
                                 int gamma_bins) {
  const FamilyParams& family = pair.family();
  require(!std::holds_alternative<GammaFamily>(family),
          "grid sampler covers Poisson, NB and gamma-NB pairs");
  const MarginalLaw law_x = marginal_law(family, Coordinate::first);
  if (const auto* f = std::get_if<GammaNBFamily>(&family)) {
    require(gamma_bins >= 2, "grid sampler needs at least two gamma bins");
    gamma_alpha_ = f->gamma.alpha();
    edges_.resize(gamma_bins + 1);
    edges_.front() = 0.0;
    edges_.back() = std::numeric_limits<double>::infinity();
    for (int k = 1; k < gamma_bins; ++k) {
      edges_[k] = gamma_quantile(static_cast<double>(k) / gamma_bins, f->gamma);
    }
    table_ = gamma_nb_table<MeixnerRow>(*f, pair.rho(), discrete_cut(law_x), edges_, trunc);
  } else {
    const MarginalLaw law_y = marginal_law(family, Coordinate::second);
    table_ = joint_table(pair, trunc, discrete_cut(law_x), discrete_cut(law_y));
  }
  CompensatedSum<double> clipped;
  CompensatedSum<double> kept;
  for (Eigen::Index j = 0; j < table_.cols(); ++j) {
    for (Eigen::Index i = 0; i < table_.rows(); ++i) {
      double& cell = table_(i, j);
      if (cell < 0.0) {
        clipped += -cell;
        cell = 0.0;
      }
      kept += cell;
    }
  }
  clipped_ = clipped.value();
  if (clipped_ > kClipLimit) {
    throw ClippingError("grid sampler clipped negative mass " + std::to_string(clipped_) +
                        " above 1e-6");
  }
  renormalization_ = 1.0 / kept.value();
  table_ *= renormalization_;
  cumulative_.resize(static_cast<std::size_t>(table_.size()));
  CompensatedSum<double> run;
  for (Eigen::Index k = 0; k < table_.size(); ++k) {
    run += table_.data()[k];
    cumulative_[static_cast<std::size_t>(k)] = run.value();
  }
}

std::pair<double, double> GridPairSampler::operator()(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  // skip zero-mass cells at the boundary of the search
  while (it != cumulative_.begin() && table_.data()[it - cumulative_.begin()] == 0.0) --it;
  const auto k = static_cast<Eigen::Index>(it - cumulative_.begin());
  const Eigen::Index i = k % table_.rows();
  const Eigen::Index j = k / table_.rows();
  if (edges_.empty()) return {static_cast<double>(i), static_cast<double>(j)};
  const double bins = static_cast<double>(edges_.size() - 1);
  const double q = (static_cast<double>(j) + rng.uniform()) / bins;
  const GammaParams gp(gamma_alpha_);
  const double hi = edges_[j + 1];
  const double y = std::isfinite(hi) ? gamma_quantile_bracketed(q, gp, edges_[j], hi)
                                     : gamma_quantile(q, gp);
  return {static_cast<double>(i), y};
}

std::pair<double, double> sample_pair_grid(const LancasterPair& pair, const Truncation& trunc,
                                           Rng& rng) {
  return GridPairSampler(pair, trunc)(rng);
}

// --- vectors -------------------------------------------------------------------------

MarginalLaw coordinate_law(const FamilyParams& family, Count index) {
  const Coordinate c = std::holds_alternative<GammaNBFamily>(family) && index % 2 == 1
                           ? Coordinate::second
                           : Coordinate::first;
  return marginal_law(family, c);
}

namespace {

SamplerPath choose_path(const DependenceDesign& d) {
  return std::visit(
      [&](const auto& f) -> SamplerPath {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, GammaFamily>) {
          return SamplerPath::gamma_kibble;
        } else if constexpr (std::is_same_v<F, PoissonFamily>) {
          return SamplerPath::poisson_shock;
        } else if constexpr (std::is_same_v<F, NegBinomialFamily>) {
          if (d.rho < f.params.c()) return SamplerPath::nb_kibble;
          require(d.block_size <= 2, "NB designs with rho >= c need block_size <= 2");
          return SamplerPath::nb_grid;
        } else {
          require(d.block_size <= 2, "gamma-NB designs need block_size <= 2");
          return f.gamma.alpha() == f.nb.beta() ? SamplerPath::gamma_nb_mixture
                                                : SamplerPath::gamma_nb_grid;
        }
      },
      d.family);
}

}  // namespace

VectorSampler::VectorSampler(DependenceDesign design, const Truncation& trunc)
    : design_(std::move(design)) {
  design_.validate();
  path_ = choose_path(design_);
  const bool pairs = design_.block_size == 2 && design_.rho > 0.0;
  if (pairs && (path_ == SamplerPath::nb_grid || path_ == SamplerPath::gamma_nb_grid)) {
    grid_.emplace_back(LancasterPair(design_.family, design_.rho), trunc);
  }
}

StatisticVector VectorSampler::operator()(std::uint64_t replication) const {
  StatisticVector out;
  sample_into(replication, out);
  return out;
}

void VectorSampler::sample_into(std::uint64_t replication, StatisticVector& out) const {
  const Count m = design_.m;
  const Count m0 = design_.m0();
  out.values.assign(static_cast<std::size_t>(m), 0.0);
  out.null_mask.assign(static_cast<std::size_t>(m), false);
  if (design_.null_layout == NullLayout::leading) {
    std::fill_n(out.null_mask.begin(), m0, true);
  } else {
    // choose m0 positions by a partial Fisher-Yates shuffle
    Rng rng = stream(design_.seed, replication, kLayoutStream);
    std::vector<Count> order(static_cast<std::size_t>(m));
    for (Count i = 0; i < m; ++i) order[i] = i;
    for (Count i = 0; i < m0; ++i) {
      const auto span = static_cast<double>(m - i);
      const Count j = i + std::min<Count>(static_cast<Count>(rng.uniform() * span), m - i - 1);
      std::swap(order[i], order[j]);
      out.null_mask[order[i]] = true;
    }
  }
  Count block = 0;
  for (Count start = 0; start < m; start += design_.block_size, ++block) {
    const Count size = std::min(design_.block_size, m - start);
    Rng rng = stream(design_.seed, replication, static_cast<std::uint64_t>(block));
    fill_block(rng, start, size, out.values);
    for (Count i = start; i < start + size; ++i) {
      if (!out.null_mask[i]) apply_alternative(rng, i, out.values[i]);
    }
  }
}

void VectorSampler::fill_block(Rng& rng, Count start, Count size,
                               std::vector<double>& values) const {
  double* out = values.data() + start;
  const double rho = design_.rho;
  switch (path_) {
    case SamplerPath::gamma_kibble: {
      const auto& f = std::get<GammaFamily>(design_.family);
      kibble_block(f.params.alpha(), rho, rng, out, size);
      return;
    }
    case SamplerPath::poisson_shock: {
      const double a = std::get<PoissonFamily>(design_.family).params.mean();
      const auto w = static_cast<double>(draw_poisson(rho * a, rng));
      for (Count i = 0; i < size; ++i) {
        out[i] = w + static_cast<double>(draw_poisson((1.0 - rho) * a, rng));
      }
      return;
    }
    case SamplerPath::nb_kibble: {
      const NBParams& p = std::get<NegBinomialFamily>(design_.family).params;
      kibble_block(p.beta(), rho / p.c(), rng, out, size);
      const double scale = nb_mixing_scale(p);
      for (Count i = 0; i < size; ++i) {
        out[i] = static_cast<double>(draw_poisson(out[i] * scale, rng));
      }
      return;
    }
    case SamplerPath::nb_grid:
    case SamplerPath::gamma_nb_grid:
    case SamplerPath::gamma_nb_mixture: {
      if (size == 2 && rho > 0.0) {
        std::pair<double, double> xy;
        if (path_ == SamplerPath::gamma_nb_mixture) {
          const auto& f = std::get<GammaNBFamily>(design_.family);
          xy = sample_pair_gamma_nb(f.gamma, f.nb, rho, rng);
        } else {
          xy = grid_.front()(rng);
        }
        out[0] = xy.first;
        out[1] = xy.second;
        return;
      }
      for (Count i = 0; i < size; ++i) {
        const MarginalLaw law = coordinate_law(design_.family, start + i);
        if (const auto* g = std::get_if<GammaParams>(&law.params())) {
          out[i] = draw_gamma(g->alpha(), rng);
        } else {
          const NBParams& p = std::get<NBParams>(law.params());
          out[i] = static_cast<double>(draw_nb(p.beta(), p.c(), rng));
        }
      }
      return;
    }
  }
}

void VectorSampler::apply_alternative(Rng& rng, Count index, double& value) const {
  const MarginalLaw law = coordinate_law(design_.family, index);
  const Alternative& alt = design_.alt;
  if (!law.discrete()) {
    value *= alt.scale_factor;
  } else if (alt.mean_shift > 0.0) {
    if (const auto* p = std::get_if<NBParams>(&law.params())) {
      const double beta = alt.mean_shift * (1.0 - p->c()) / p->c();
      value += static_cast<double>(draw_nb(beta, p->c(), rng));
    } else {
      value += static_cast<double>(draw_poisson(alt.mean_shift, rng));
    }
  }
}

}  // namespace lancaster
