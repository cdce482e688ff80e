#pragma once

// Block-dependence designs: m statistics split into consecutive blocks, every
// within-block pair following the family's Lancaster law with correlation rho,
// blocks mutually independent. The implied correlation matrix has
// ||R||_1 = m + rho * sum_k b_k (b_k - 1).

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lancaster/lancaster.hpp"

namespace lancaster {

/// How non-null coordinates are shifted. Gamma statistics are multiplied by
/// scale_factor; Poisson and NB statistics gain mean_shift in expectation
/// (Poisson by an independent Poisson(shift) addend, NB by an independent
/// NB(shift (1-c)/c, c) addend, which keeps the family).
struct Alternative {
  double scale_factor = 1.0;
  double mean_shift = 0.0;
};

enum class NullLayout { random, leading };

struct DependenceDesign {
  Count m = 0;
  Count block_size = 1;
  double rho = 0.0;
  FamilyParams family;
  double pi0 = 1.0;
  Alternative alt;
  std::uint64_t seed = 0;
  NullLayout null_layout = NullLayout::random;

  /// Throws std::domain_error on an invalid design.
  void validate() const;
  /// round(pi0 * m).
  Count m0() const;
  /// Consecutive block lengths; the last block may be short.
  std::vector<Count> block_sizes() const;
  /// Number of ordered within-block pairs i != j, sum_k b_k (b_k - 1).
  Count within_block_pairs() const;
};

/// Block length as a function of m, for sweeps over growing m.
struct BlockRule {
  enum class Kind { fixed, power, full };
  Kind kind = Kind::fixed;
  Count size = 1;         // fixed
  double exponent = 0.5;  // power: b = ceil(m^exponent)

  Count block_size(Count m) const;
};

struct DesignTemplate {
  FamilyParams family;
  double rho = 0.0;
  double pi0 = 1.0;
  Alternative alt;
  BlockRule block;
  NullLayout null_layout = NullLayout::random;

  DependenceDesign instantiate(Count m, std::uint64_t seed) const;
};

/// sum_{i,j} |rho_ij| of the design's correlation matrix, in closed form.
double l1_norm(const DependenceDesign& design);
/// Entrywise absolute sum.
double l1_norm_matrix(const Eigen::MatrixXd& R);
/// Explicit R; only sensible for small m.
Eigen::MatrixXd correlation_matrix(const DependenceDesign& design);

}  // namespace lancaster
