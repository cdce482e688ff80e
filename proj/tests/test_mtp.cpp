#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lancaster/mtp.hpp"

using namespace lancaster;
using doctest::Approx;

namespace {

DependenceDesign base(FamilyParams f, Count m, Count b, double rho) {
  return {.m = m, .block_size = b, .rho = rho, .family = f, .pi0 = 0.8,
          .alt = {20.0, 6.0}, .seed = 77, .null_layout = NullLayout::random};
}

}  // namespace

TEST_CASE("p-values by family") {
  StatisticVector s{{0.0, 2.0, 5.0}, {true, true, false}};
  const auto p = pvalues(s, GammaFamily{GammaParams(1.0)});
  CHECK(p[0] == 1.0);
  CHECK(p[1] == Approx(std::exp(-2.0)));
  StatisticVector c{{0.0, 3.0}, {true, true}};
  const auto q = pvalues(c, PoissonFamily{PoissonParams(3.0)});
  CHECK(q[1] == Approx(poisson_sf(3, PoissonParams(3.0))));
  StatisticVector bad{{1.5}, {true}};
  CHECK_THROWS_AS(pvalues(bad, PoissonFamily{PoissonParams(3.0)}), std::domain_error);
}

TEST_CASE("counting R and V") {
  const std::vector<double> p = {0.01, 0.2, 0.04, 0.5, 0.05};
  const std::vector<bool> null = {true, true, false, false, true};
  const MtpOutcome o = count(p, null, Probability(0.05));
  CHECK(o.R == 3);
  CHECK(o.V == 2);
  CHECK(o.m0 == 3);
  CHECK(o.fdp == Approx(2.0 / 3.0));
  const MtpOutcome none = count(p, null, Probability(0.001));
  CHECK(none.R == 0);
  CHECK(none.fdp == 0.0);
}

TEST_CASE("Storey estimate") {
  const std::vector<double> p = {0.1, 0.6, 0.7, 0.9};
  CHECK(storey_pi0(p, Probability(0.5)) == Approx(1.0));
  const std::vector<double> q = {0.1, 0.2, 0.3, 0.9};
  CHECK(storey_pi0(q, Probability(0.5)) == Approx(0.5));
  const std::vector<double> z = {0.1, 0.2};
  CHECK(storey_pi0(z, Probability(0.5)) == Approx(1.0));
  CHECK(storey_pi0(z, Probability(0.9)) == Approx(1.0));
  const std::vector<double> many(100, 0.01);
  CHECK(storey_pi0(many, Probability(0.5)) == Approx(0.02));
}

TEST_CASE("theta estimator") {
  CHECK(theta_estimator(0.8, Probability(0.05), 10, 100) == Approx(0.8 * 0.05 / 0.1));
  CHECK(theta_estimator(1.0, Probability(0.05), 0, 100) == Approx(5.0));
}

TEST_CASE("discrete null rejection probability stays below t") {
  const double p = null_rejection_probability(PoissonFamily{PoissonParams(3.0)}, 10, Probability(0.05));
  CHECK(p == Approx(poisson_sf(5, PoissonParams(3.0))));
  CHECK(poisson_sf(6, PoissonParams(3.0)) <= 0.05);
  const FamilyParams gnb = GammaNBFamily{GammaParams(1.0), NBParams(1.0, 0.5)};
  const double mixed = null_rejection_probability(gnb, 3, Probability(0.05));
  const double nb = nb_sf(nb_upper_threshold(Probability(0.05), NBParams(1.0, 0.5)), NBParams(1.0, 0.5));
  CHECK(mixed == Approx((2 * nb + 0.05) / 3));
}

TEST_CASE("threshold counter agrees with explicit p-values") {
  for (const FamilyParams& f : {FamilyParams(GammaFamily{GammaParams(0.5)}),
                                FamilyParams(PoissonFamily{PoissonParams(3.0)}),
                                FamilyParams(NegBinomialFamily{NBParams(2.0, 0.5)}),
                                FamilyParams(GammaNBFamily{GammaParams(1.0), NBParams(1.0, 0.5)})}) {
    const DependenceDesign d = base(f, 300, 2, 0.3);
    const VectorSampler s(d);
    const ThresholdCounter counter(f, d.m, Probability(0.05), Probability(0.5));
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      const StatisticVector v = s(rep);
      const auto p = pvalues(v, f);
      const MtpOutcome want = count(p, v.null_mask, Probability(0.05));
      const MtpOutcome got = counter(v);
      CHECK(got.R == want.R);
      CHECK(got.V == want.V);
      const double pi0 = storey_pi0(p, Probability(0.5));
      CHECK(got.theta == Approx(theta_estimator(pi0, Probability(null_rejection_probability(f, d.m, Probability(0.05))),
                                                want.R, d.m)));
    }
  }
}

TEST_CASE("simulate is deterministic across thread counts") {
  const DependenceDesign d = base(GammaFamily{GammaParams(1.0)}, 500, 25, 0.5);
  RunOptions one{0.05, 0.5, 1}, four{0.05, 0.5, 4};
  const auto a = simulate(d, 40, one);
  const auto b = simulate(d, 40, four);
  std::ostringstream sa, sb;
  write_outcomes_csv(sa, a);
  write_outcomes_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("m,replication,R,V,fdp,theta\n", 0) == 0);
}

TEST_CASE("dispersion and log-log slope") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  const Dispersion d = dispersion(v);
  CHECK(d.mean == Approx(2.5));
  CHECK(d.sd == Approx(std::sqrt(5.0 / 3.0)));
  CHECK(d.max_abs_dev == Approx(1.5));
  const std::vector<double> x = {10, 100, 1000};
  const std::vector<double> y = {1.0, 0.1, 0.01};
  CHECK(loglog_slope(x, y) == Approx(-1.0));
}

TEST_CASE("SLLN sweep shrinks dispersion under sqrt-size blocks") {
  const DesignTemplate t{.family = GammaFamily{GammaParams(1.0)},
                         .rho = 0.5,
                         .pi0 = 0.8,
                         .alt = {20.0, 0.0},
                         .block = {BlockRule::Kind::power, 1, 0.5},
                         .null_layout = NullLayout::random};
  const std::vector<Count> grid = {100, 400, 1600};
  const SllnTrace tr = slln_sweep(t, grid, 150, 5, RunOptions{});
  REQUIRE(tr.rows.size() == 3);
  CHECK(tr.rows[2].block_size == 40);
  CHECK(tr.rows[2].rejection_rate.sd < tr.rows[0].rejection_rate.sd);
  CHECK(tr.slope_rejection < -0.1);
  CHECK(tr.rows[1].false_rate.mean == Approx(0.05).epsilon(0.2));
}

TEST_CASE("weak-dependence curves") {
  const DesignTemplate t{.family = PoissonFamily{PoissonParams(3.0)},
                         .rho = 0.4,
                         .pi0 = 0.8,
                         .alt = {1.0, 6.0},
                         .block = {BlockRule::Kind::fixed, 10, 0.0},
                         .null_layout = NullLayout::random};
  const std::vector<Count> ms = {500};
  const std::vector<double> ts = {0.01, 0.1, 0.3};
  const auto curves = weak_dependence_curves(t, ms, ts, 100, 2);
  REQUIRE(curves.size() == 1);
  const auto& pts = curves[0].points;
  REQUIRE(pts.size() == 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const MarginalLaw law(PoissonParams(3.0));
    CHECK(pts[i].g0.mean == Approx(law.rejection_probability(Probability(ts[i]))).epsilon(0.15));
    CHECK(pts[i].g0_band >= 0.0);
  }
  CHECK(pts[0].g1.mean < pts[1].g1.mean);
  CHECK(pts[1].g1.mean < pts[2].g1.mean);
}

TEST_CASE("parallel_for propagates worker exceptions") {
  CHECK_THROWS_AS(parallel_for(10, 3, [](Count i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](Count i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}
