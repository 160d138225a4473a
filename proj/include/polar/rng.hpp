// Seeded per-frame random streams.
//
// Every simulated frame draws from its own stream, keyed by (master seed,
// sweep point, frame index). Frames are therefore independent of scheduling
// order: a parallel run consumes exactly the same randomness as a serial one.

#pragma once

#include <cstdint>
#include <random>

#include "polar/types.hpp"

namespace polar {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= a;
  h ^= splitmix64(s);
  s ^= b;
  h ^= splitmix64(s);
  return h;
}

class FrameRng {
 public:
  FrameRng(std::uint64_t master_seed, std::uint64_t point_key, std::uint64_t frame_index)
      : gen_(derive_stream_seed(master_seed, point_key, frame_index)) {}

  explicit FrameRng(std::uint64_t seed) : gen_(seed) {}

  Bit next_bit() { return static_cast<Bit>(gen_() & 1u); }

  double next_gaussian(double sigma) { return sigma * normal_(gen_); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace polar
