#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace swgame {

// SplitMix64 step: advances `state` and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Seed of the independent stream `stream` under `master`: the second
// SplitMix64 output started from master + stream * 0x9E3779B97F4A7C15.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) noexcept;

// Seedable generator with reproducible draws on every platform: uniforms are
// the top 53 bits of a mt19937_64 output, normals come from the Marsaglia
// polar transform of those uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept;  // [0, 1)
  double normal() noexcept;
  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) noexcept;

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace swgame
