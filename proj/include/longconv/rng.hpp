#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "longconv/types.hpp"

namespace longconv {

// xoshiro256++ seeded through splitmix64. Integer state only, so streams are
// reproducible across platforms and runs. Normal draws use Box-Muller on the
// uniform stream.
//
// Parallel code must not share one generator; derive per-task streams with
// child(stream_id).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Independent stream keyed by (seed, stream_id).
  SeededRng child(std::uint64_t stream_id) const;

  std::uint64_t next_u64();
  double uniform01();   // [0, 1)
  double normal();      // standard normal

 private:
  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// count finite draws from N(0, 1); deterministic given the generator state.
std::vector<double> standard_normal_draws(SeededRng& rng, std::size_t count);

}  // namespace longconv
