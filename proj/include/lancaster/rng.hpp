#pragma once

// Philox4x32-10 counter-based generator. A stream is fixed by the seed (the
// key) and two 32-bit stream words in the counter; the remaining 64 counter
// bits index the draws. Streams for distinct (replication, block) pairs are
// therefore independent and can be consumed in any order.

#include <array>
#include <cstdint>
#include <limits>

namespace lancaster {

class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint32_t stream_a, std::uint32_t stream_b);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  void discard(std::uint64_t n);

  /// Ten rounds of the Philox bijection.
  static Block encrypt(Block counter, Key key);

 private:
  void refill();

  Key key_;
  std::uint32_t stream_a_;
  std::uint32_t stream_b_;
  std::uint64_t position_ = 0;  // next 128-bit block
  Block buffer_{};
  int used_ = 4;
};

/// The stream for one block of one replication of a seeded experiment.
inline Philox4x32 stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t block) {
  return {seed, static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(block)};
}

/// splitmix64 finalizer, for deriving child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace lancaster
