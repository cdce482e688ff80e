#include <doctest.h>

#include <stdexcept>

#include "lancaster/design.hpp"

using namespace lancaster;
using doctest::Approx;

namespace {
DependenceDesign make(Count m, Count b, double rho) {
  return {.m = m, .block_size = b, .rho = rho, .family = GammaFamily{GammaParams(1.0)},
          .pi0 = 0.8, .alt = {}, .seed = 9, .null_layout = NullLayout::random};
}
}  // namespace

TEST_CASE("block sizes cover m with a short final block") {
  const auto d = make(23, 5, 0.3);
  CHECK(d.block_sizes() == std::vector<Count>{5, 5, 5, 5, 3});
  CHECK(d.within_block_pairs() == 4 * 20 + 6);
  CHECK(d.m0() == 18);
}

TEST_CASE("closed-form L1 norm equals the explicit matrix sum") {
  for (Count m : {1, 7, 30}) {
    for (Count b : {1, 2, 6, 30}) {
      const auto d = make(m, std::min(b, m), 0.35);
      const Eigen::MatrixXd R = correlation_matrix(d);
      CHECK(R.diagonal().isOnes());
      CHECK(R.isApprox(R.transpose()));
      CHECK(l1_norm(d) == Approx(l1_norm_matrix(R)).epsilon(1e-14));
    }
  }
}

TEST_CASE("block rules") {
  BlockRule fixed{BlockRule::Kind::fixed, 10, 0.0};
  CHECK(fixed.block_size(4) == 4);
  CHECK(fixed.block_size(400) == 10);
  BlockRule power{BlockRule::Kind::power, 1, 0.5};
  CHECK(power.block_size(100) == 10);
  CHECK(power.block_size(101) == 11);
  CHECK(power.block_size(1) == 1);
  BlockRule full{BlockRule::Kind::full, 1, 0.0};
  CHECK(full.block_size(77) == 77);
}

TEST_CASE("templates instantiate validated designs") {
  const DesignTemplate t{.family = PoissonFamily{PoissonParams(2.0)},
                         .rho = 0.5,
                         .pi0 = 0.9,
                         .alt = {1.0, 3.0},
                         .block = {BlockRule::Kind::power, 1, 0.5},
                         .null_layout = NullLayout::leading};
  const DependenceDesign d = t.instantiate(400, 17);
  CHECK(d.m == 400);
  CHECK(d.block_size == 20);
  CHECK(d.seed == 17);
  CHECK(d.null_layout == NullLayout::leading);
  CHECK(d.alt.mean_shift == 3.0);
}

TEST_CASE("invalid designs are rejected") {
  CHECK_THROWS_AS(make(0, 1, 0.0).validate(), std::domain_error);
  CHECK_THROWS_AS(make(10, 11, 0.0).validate(), std::domain_error);
  CHECK_THROWS_AS(make(10, 2, 1.0).validate(), std::domain_error);
  auto d = make(10, 2, 0.2);
  d.pi0 = 1.2;
  CHECK_THROWS_AS(d.validate(), std::domain_error);
  auto alt = make(10, 2, 0.2);
  alt.alt.scale_factor = 0.0;
  CHECK_THROWS_AS(alt.validate(), std::domain_error);
}
