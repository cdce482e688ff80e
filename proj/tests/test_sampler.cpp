#include <doctest.h>

#include <cmath>
#include <functional>

#include "lancaster/covariance.hpp"
#include "lancaster/errors.hpp"
#include "lancaster/sampler.hpp"

using namespace lancaster;

namespace {

struct Moments {
  double mean_x = 0, mean_y = 0, corr = 0, cov_ind = 0;
};

// Pearson correlation and indicator covariance at the 5% upper cut.
Moments moments(const std::function<std::pair<double, double>(Rng&)>& draw, int n,
                const MarginalLaw& lx, const MarginalLaw& ly, std::uint64_t seed) {
  Rng rng(seed, 0, 0);
  const Probability t(0.05);
  const double cx = lx.upper_threshold(t), cy = ly.upper_threshold(t);
  auto hit = [](const MarginalLaw& l, double v, double c) {
    return l.discrete() ? v > c : v >= c;
  };
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, ix = 0, iy = 0, ixy = 0;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = draw(rng);
    sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
    const bool a = hit(lx, x, cx), b = hit(ly, y, cy);
    ix += a, iy += b, ixy += a && b;
  }
  Moments m;
  m.mean_x = sx / n;
  m.mean_y = sy / n;
  const double vx = sxx / n - m.mean_x * m.mean_x, vy = syy / n - m.mean_y * m.mean_y;
  m.corr = (sxy / n - m.mean_x * m.mean_y) / std::sqrt(vx * vy);
  m.cov_ind = ixy / n - (ix / n) * (iy / n);
  return m;
}

void check_path(const LancasterPair& pair, const std::function<std::pair<double, double>(Rng&)>& draw,
                double mean_x, double mean_y, std::uint64_t seed) {
  const int n = 60000;
  const MarginalLaw lx = marginal_law(pair.family(), Coordinate::first);
  const MarginalLaw ly = marginal_law(pair.family(), Coordinate::second);
  const Moments m = moments(draw, n, lx, ly, seed);
  const double k = kappa(pair, Probability(0.05), {2000, 1e-13}, {true}).value;
  const double sx = lx.rejection_probability(Probability(0.05));
  const double sy = ly.rejection_probability(Probability(0.05));
  const double se_ind = std::sqrt(sx * (1 - sx) * sy * (1 - sy) / n);
  CHECK(std::abs(m.corr - pair.rho()) < 5.0 / std::sqrt(n) * (1 + pair.rho()));
  CHECK(std::abs(m.cov_ind - k) < 5.0 * se_ind);
  CHECK(m.mean_x == doctest::Approx(mean_x).epsilon(0.03));
  CHECK(m.mean_y == doctest::Approx(mean_y).epsilon(0.03));
}

}  // namespace

TEST_CASE("primitive draws have the right means") {
  Rng rng(5, 0, 0);
  double g = 0, p = 0, nb = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    g += draw_gamma(0.4, rng);
    p += static_cast<double>(draw_poisson(3.5, rng));
    nb += static_cast<double>(draw_nb(2.0, 0.6, rng));
  }
  CHECK(g / n == doctest::Approx(0.4).epsilon(0.02));
  CHECK(p / n == doctest::Approx(3.5).epsilon(0.02));
  CHECK(nb / n == doctest::Approx(3.0).epsilon(0.02));
  CHECK(draw_poisson(0.0, rng) == 0);
}

TEST_CASE("gamma pairs: correlation and indicator covariance") {
  const GammaParams g(0.5);
  const LancasterPair pair(GammaFamily{g}, 0.6);
  check_path(pair, [&](Rng& r) { return sample_pair_gamma(g, 0.6, r); }, 0.5, 0.5, 11);
}

TEST_CASE("Poisson common-shock pairs") {
  const PoissonParams p(3.0);
  const LancasterPair pair(PoissonFamily{p}, 0.5);
  check_path(pair, [&](Rng& r) {
    const auto [x, y] = sample_pair_poisson(p, 0.5, r);
    return std::pair<double, double>(x, y);
  }, 3.0, 3.0, 12);
}

TEST_CASE("negative binomial exact pairs for rho < c") {
  const NBParams nb(2.0, 0.5);
  const LancasterPair pair(NegBinomialFamily{nb}, 0.4);
  check_path(pair, [&](Rng& r) {
    const auto [x, y] = sample_pair_nb(nb, 0.4, r);
    return std::pair<double, double>(x, y);
  }, 2.0, 2.0, 13);
}

TEST_CASE("negative binomial grid pairs for rho >= c") {
  const NBParams nb(2.0, 0.5);
  const LancasterPair pair(NegBinomialFamily{nb}, 0.7);
  const GridPairSampler grid(pair);
  CHECK(grid.clipped_mass() <= 1e-6);
  CHECK(grid.table().sum() == doctest::Approx(1.0).epsilon(1e-9));
  check_path(pair, [&](Rng& r) { return grid(r); }, 2.0, 2.0, 14);
}

TEST_CASE("gamma-NB mixture with equal shapes") {
  const GammaParams g(2.0);
  const NBParams nb(2.0, 0.5);
  const LancasterPair pair(GammaNBFamily{g, nb}, 0.5);
  // first coordinate is the count, second the gamma variate
  check_path(pair, [&](Rng& r) { return sample_pair_gamma_nb(g, nb, 0.5, r); }, 2.0, 2.0, 15);
}

TEST_CASE("gamma-NB grid with unequal shapes") {
  const LancasterPair pair(GammaNBFamily{GammaParams(1.0), NBParams(2.0, 0.25)}, 0.3);
  const GridPairSampler grid(pair);
  CHECK(grid.clipped_mass() <= 1e-6);
  check_path(pair, [&](Rng& r) { return grid(r); }, 2.0 * 0.25 / 0.75, 1.0, 16);
}

TEST_CASE("a kernel with negative mass raises ClippingError") {
  const LancasterPair pair(GammaNBFamily{GammaParams(1.0), NBParams(2.0, 0.25)}, 0.4);
  CHECK_THROWS_AS(GridPairSampler{pair}, ClippingError);
}

TEST_CASE("unequal gamma-NB shapes need the grid") {
  Rng rng(1, 0, 0);
  CHECK_THROWS_AS(sample_pair_gamma_nb(GammaParams(1.0), NBParams(2.0, 0.25), 0.3, rng),
                  std::domain_error);
  CHECK_THROWS_AS(sample_pair_nb(NBParams(2.0, 0.5), 0.6, rng), std::domain_error);
}

TEST_CASE("vector sampler paths and layout") {
  auto design = [](FamilyParams f, Count b, double rho) {
    return DependenceDesign{.m = 40, .block_size = b, .rho = rho, .family = f, .pi0 = 0.75,
                            .alt = {3.0, 2.0}, .seed = 99, .null_layout = NullLayout::random};
  };
  CHECK(VectorSampler(design(GammaFamily{GammaParams(1.0)}, 8, 0.5)).path() == SamplerPath::gamma_kibble);
  CHECK(VectorSampler(design(PoissonFamily{PoissonParams(1.0)}, 8, 1.0)).path() == SamplerPath::poisson_shock);
  CHECK(VectorSampler(design(NegBinomialFamily{NBParams(1.0, 0.5)}, 8, 0.3)).path() == SamplerPath::nb_kibble);
  CHECK(VectorSampler(design(NegBinomialFamily{NBParams(1.0, 0.5)}, 2, 0.6)).path() == SamplerPath::nb_grid);
  CHECK_THROWS_AS(VectorSampler(design(NegBinomialFamily{NBParams(1.0, 0.5)}, 3, 0.6)), std::domain_error);
  CHECK(VectorSampler(design(GammaNBFamily{GammaParams(1.0), NBParams(1.0, 0.5)}, 2, 0.4)).path() ==
        SamplerPath::gamma_nb_mixture);
  CHECK(VectorSampler(design(GammaNBFamily{GammaParams(1.0), NBParams(2.0, 0.25)}, 2, 0.3)).path() ==
        SamplerPath::gamma_nb_grid);

  const VectorSampler s(design(GammaFamily{GammaParams(1.0)}, 8, 0.5));
  const StatisticVector a = s(3), b = s(3), c = s(4);
  CHECK(a.values == b.values);
  CHECK(a.null_mask == b.null_mask);
  CHECK(a.values != c.values);
  CHECK(std::count(a.null_mask.begin(), a.null_mask.end(), true) == 30);

  auto lead = design(PoissonFamily{PoissonParams(2.0)}, 4, 0.2);
  lead.null_layout = NullLayout::leading;
  const StatisticVector l = VectorSampler(lead)(0);
  for (Count i = 0; i < 40; ++i) CHECK(l.null_mask[i] == (i < 30));
}

TEST_CASE("gamma-NB coordinates alternate between count and continuous laws") {
  const FamilyParams f = GammaNBFamily{GammaParams(1.0), NBParams(1.0, 0.5)};
  CHECK(coordinate_law(f, 0).discrete());
  CHECK_FALSE(coordinate_law(f, 1).discrete());
  CHECK(coordinate_law(f, 2).discrete());
}

TEST_CASE("alternatives shift the non-null coordinates") {
  DependenceDesign d{.m = 2000, .block_size = 1, .rho = 0.0, .family = PoissonFamily{PoissonParams(2.0)},
                     .pi0 = 0.5, .alt = {1.0, 4.0}, .seed = 3, .null_layout = NullLayout::leading};
  const StatisticVector v = VectorSampler(d)(0);
  double null_mean = 0, alt_mean = 0;
  for (Count i = 0; i < 1000; ++i) null_mean += v.values[i] / 1000;
  for (Count i = 1000; i < 2000; ++i) alt_mean += v.values[i] / 1000;
  CHECK(null_mean == doctest::Approx(2.0).epsilon(0.08));
  CHECK(alt_mean == doctest::Approx(6.0).epsilon(0.05));
}
