#pragma once

#include <cstdint>

namespace rmtdpp {

// Counter-based generator: draw k of stream s under seed z is a fixed hash
// of (z, s, k), so results do not depend on scheduling or platform.
//
// Stream layout used by the library: stream 0 is the caller's main stream;
// sample i of a multi-sample run uses split(i + 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Standard normal via Box-Muller.
  double normal() noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Independent generator for sub-stream `stream` under the same seed.
  Rng split(std::uint64_t stream) const noexcept { return Rng(seed_, stream); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_, stream_, key_, counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmtdpp
