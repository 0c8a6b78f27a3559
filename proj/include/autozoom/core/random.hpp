#pragma once

#include <cstdint>
#include <random>

namespace autozoom {

// 64-bit LCG (Knuth MMIX constants, modulus 2^64). Fixing the engine and the
// conversions below makes every seeded artifact reproducible bit for bit.
using Lcg64 = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                              1442695040888963407ULL, 0ULL>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return (next_u64() >> 11) % n; }

 private:
  Lcg64 engine_;
};

// Derives an independent stream seed, e.g. per clip.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace autozoom
