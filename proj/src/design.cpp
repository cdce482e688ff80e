#include "lancaster/design.hpp"

#include <cmath>
#include <stdexcept>

namespace lancaster {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

void DependenceDesign::validate() const {
  require(m >= 1, "design needs m >= 1");
  require(block_size >= 1 && block_size <= m, "design needs 1 <= block_size <= m");
  require(rho_admissible(family, rho), "design rho outside the family range");
  require(pi0 >= 0.0 && pi0 <= 1.0, "design pi0 must lie in [0, 1]");
  require(alt.scale_factor > 0.0 && std::isfinite(alt.scale_factor),
          "alternative scale_factor must be positive");
  require(alt.mean_shift >= 0.0 && std::isfinite(alt.mean_shift),
          "alternative mean_shift must be >= 0");
}

Count DependenceDesign::m0() const {
  return static_cast<Count>(std::llround(pi0 * static_cast<double>(m)));
}

std::vector<Count> DependenceDesign::block_sizes() const {
  std::vector<Count> sizes;
  for (Count start = 0; start < m; start += block_size) {
    sizes.push_back(std::min(block_size, m - start));
  }
  return sizes;
}

Count DependenceDesign::within_block_pairs() const {
  const Count full = m / block_size;
  const Count rest = m % block_size;
  return full * block_size * (block_size - 1) + rest * (rest - 1);
}

Count BlockRule::block_size(Count m) const {
  require(m >= 1, "block rule needs m >= 1");
  switch (kind) {
    case Kind::fixed:
      require(size >= 1, "fixed block size must be >= 1");
      return std::min(size, m);
    case Kind::power: {
      require(exponent >= 0.0 && exponent <= 1.0, "block exponent must lie in [0, 1]");
      // the small offset keeps exact powers such as 10000^0.5 from rounding up
      const double b = std::ceil(std::pow(static_cast<double>(m), exponent) - 1e-9);
      return std::clamp<Count>(static_cast<Count>(b), 1, m);
    }
    case Kind::full:
      return m;
  }
  return 1;
}

DependenceDesign DesignTemplate::instantiate(Count m, std::uint64_t seed) const {
  DependenceDesign d{.m = m,
                     .block_size = block.block_size(m),
                     .rho = rho,
                     .family = family,
                     .pi0 = pi0,
                     .alt = alt,
                     .seed = seed,
                     .null_layout = null_layout};
  d.validate();
  return d;
}

double l1_norm(const DependenceDesign& design) {
  design.validate();
  return static_cast<double>(design.m) +
         design.rho * static_cast<double>(design.within_block_pairs());
}

double l1_norm_matrix(const Eigen::MatrixXd& R) { return R.cwiseAbs().sum(); }

Eigen::MatrixXd correlation_matrix(const DependenceDesign& design) {
  design.validate();
  const Eigen::Index m = design.m;
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(m, m);
  Eigen::Index start = 0;
  for (const Count b : design.block_sizes()) {
    R.block(start, start, b, b).setConstant(design.rho);
    start += b;
  }
  R.diagonal().setOnes();
  return R;
}

}  // namespace lancaster
