#pragma once

#include "plrslab/plrs.hpp"

#include <cstdint>
#include <random>

namespace plrs {

/// Deterministic random word stream. Independent substreams are derived
/// from (seed, stream), so sampling loops can be partitioned across workers
/// by index with results independent of the partitioning. mt19937_64 is
/// fully specified by the standard, making outputs reproducible across
/// platforms.
class BitStream {
 public:
  BitStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9u};
    engine_.seed(seq);
  }

  std::uint64_t next_word() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Uniform integer in [0, bound) by rejection sampling on fixed-width
/// random bit strings; exact uniformity, no modulo bias. bound must be >= 1.
BigInt uniform_below(BitStream& bits, const BigInt& bound);

}  // namespace plrs
