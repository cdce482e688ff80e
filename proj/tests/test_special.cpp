#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lancaster/special.hpp"
#include "oracle_values.hpp"

using namespace lancaster;
using doctest::Approx;

namespace {
bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300);
}
}  // namespace

TEST_CASE("log-gamma against high-precision values") {
  CHECK(rel_close(log_gamma(0.3), oracle::kLogGamma0, 1e-14));
  CHECK(rel_close(log_gamma(1e-5), oracle::kLogGamma1, 1e-14));
  CHECK(rel_close(log_gamma(7.5), oracle::kLogGamma2, 1e-14));
  CHECK(rel_close(log_gamma(123.456), oracle::kLogGamma3, 1e-14));
}

TEST_CASE("Pochhammer symbols") {
  CHECK(rel_close(pochhammer(0.5, 7), oracle::kPoch_half_7, 1e-13));
  CHECK(pochhammer(3.0, 0) == 1.0);
  CHECK(pochhammer(-3.0, 2) == Approx(6.0));
  CHECK(pochhammer(-3.0, 5) == 0.0);
  CHECK(log_pochhammer(-3.0, 4).is_zero());
  CHECK(log_pochhammer(-2.5, 3).sign == -1);
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(rel_close(regularized_gamma_p(0.5, 2.0), oracle::kRegP_half_2, 1e-13));
  CHECK(rel_close(regularized_gamma_q(2.5, 10.0), oracle::kRegQ_2p5_10, 1e-12));
  CHECK(rel_close(regularized_gamma_q(30.0, 45.0), oracle::kRegQ_30_45, 1e-12));
  CHECK(rel_close(regularized_gamma_p(0.1, 1e-3), oracle::kRegP_0p1_1em3, 1e-13));
  for (double a : {0.2, 1.0, 4.5, 60.0}) {
    for (double x : {0.01, 1.0, 7.0, 80.0}) {
      CHECK(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) == Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("gamma upper quantiles") {
  CHECK(rel_close(gamma_upper_quantile(Probability(0.05), GammaParams(1.0)), oracle::kTau_005_a1, 1e-12));
  CHECK(rel_close(gamma_upper_quantile(Probability(0.05), GammaParams(0.5)), oracle::kTau_005_ahalf, 1e-12));
  CHECK(rel_close(gamma_upper_quantile(Probability(1e-8), GammaParams(0.3)), oracle::kTau_1em8_a0p3, 1e-12));
  CHECK(rel_close(gamma_upper_quantile(Probability(0.5), GammaParams(5.0)), oracle::kTau_05_a5, 1e-12));
}

TEST_CASE("quantile round trips") {
  for (double alpha : {0.1, 0.5, 1.0, 3.0, 40.0}) {
    const GammaParams g(alpha);
    for (double q : {1e-9, 0.01, 0.3, 0.5, 0.9, 0.999}) {
      const double x = gamma_quantile(q, g);
      CHECK(gamma_cdf(x, g) == Approx(q).epsilon(1e-10));
    }
    for (double t : {1e-12, 1e-4, 0.05, 0.5}) {
      const double x = gamma_upper_quantile(Probability(t), g);
      CHECK(gamma_sf(x, g) == Approx(t).epsilon(1e-10));
    }
  }
}

TEST_CASE("chi-square thresholds are twice the unit gamma quantile") {
  const ChiSquare chi = chi_square(4);
  CHECK(chi.shape.alpha() == 2.0);
  CHECK(chi.threshold(Probability(0.05)) == Approx(9.487729036781154).epsilon(1e-12));
}

TEST_CASE("gamma pdf integrates to the cdf") {
  const GammaParams g(2.5);
  CHECK(gamma_pdf(1.7, g) == Approx(std::exp(gamma_log_pdf(1.7, g))).epsilon(1e-14));
  double acc = 0.0;
  const int n = 20000;
  const double h = 3.0 / n;
  for (int i = 0; i < n; ++i) acc += gamma_pdf((i + 0.5) * h, g) * h;
  CHECK(acc == Approx(gamma_cdf(3.0, g)).epsilon(1e-7));
}

TEST_CASE("Poisson marginal") {
  const PoissonParams p(3.0);
  CHECK(rel_close(poisson_sf(5, p), oracle::kPoissonSf_5_3, 1e-13));
  CHECK(poisson_upper_threshold(Probability(0.05), p) == oracle::kPoissonX0_005_3);
  CHECK(poisson_upper_threshold(Probability(0.01), PoissonParams(10.0)) == oracle::kPoissonX0_001_10);
  double total = 0.0;
  for (Count x = 0; x < 60; ++x) total += poisson_pmf(x, p);
  CHECK(total == Approx(1.0).epsilon(1e-14));
  CHECK(poisson_cdf(4, p) + poisson_sf(4, p) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("discrete threshold definition: largest x with sf(x) > t") {
  for (double a : {0.3, 2.0, 11.0}) {
    const PoissonParams p(a);
    for (double t : {0.001, 0.05, 0.3}) {
      const Count x0 = poisson_upper_threshold(Probability(t), p);
      if (x0 >= 0) CHECK(poisson_sf(x0, p) > t);
      CHECK(poisson_sf(x0 + 1, p) <= t);
    }
  }
  const NBParams nb(2.0, 0.5);
  for (double t : {0.01, 0.05, 0.4}) {
    const Count x0 = nb_upper_threshold(Probability(t), nb);
    if (x0 >= 0) CHECK(nb_sf(x0, nb) > t);
    CHECK(nb_sf(x0 + 1, nb) <= t);
  }
}

TEST_CASE("negative binomial marginal") {
  const NBParams nb(2.0, 0.5);
  CHECK(rel_close(nb_pmf(4, nb), oracle::kNbPmf_4_2_half, 1e-13));
  CHECK(rel_close(nb_sf(6, nb), oracle::kNbSf_6_2_half, 1e-12));
  CHECK(nb_upper_threshold(Probability(0.05), nb) == oracle::kNbX0_005_2_half);
  const NBParams skew(0.4, 0.9);
  double mean = 0.0;
  for (Count x = 0; x < 2000; ++x) mean += static_cast<double>(x) * nb_pmf(x, skew);
  CHECK(mean == Approx(0.4 * 0.9 / 0.1).epsilon(1e-10));
}

TEST_CASE("gamma ratio and its large-z expansion") {
  CHECK(rel_close(gamma_ratio_exact(50.0, 0.5, 1.5), oracle::kGammaRatio_50, 1e-12));
  for (double z : {1e2, 1e3, 1e4}) {
    const double rel = std::abs(gamma_ratio_tricomi(z, 0.3, 1.0) / gamma_ratio_exact(z, 0.3, 1.0) - 1.0);
    CHECK(rel < 1.0 / (z * z));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Probability(1.5), std::domain_error);
  CHECK_THROWS_AS(Probability(-0.1), std::domain_error);
  CHECK_THROWS_AS(GammaParams(0.0), std::domain_error);
  CHECK_THROWS_AS(PoissonParams(-1.0), std::domain_error);
  CHECK_THROWS_AS(NBParams(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(NBParams(0.0, 0.5), std::domain_error);
  CHECK(GammaParams(1.0).in_comparison_range());
  CHECK_FALSE(GammaParams(1.5).in_comparison_range());
}
