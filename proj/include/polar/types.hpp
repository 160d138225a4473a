// Shared types and numeric limits for the polar coding library.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace polar {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;
using LlrVector = std::vector<double>;

// Symmetric saturation bound for all LLR arithmetic. Shortened code bits are
// re-inserted at +kLlrMax, standing in for a perfectly known zero.
inline constexpr double kLlrMax = 200.0;

// Largest supported transform order: mother codes up to N = 2^20.
inline constexpr int kMaxStages = 20;

// Cap for Gaussian-approximation means. Dominates every finite mean the
// evolution can produce while keeping phi() evaluations in range.
inline constexpr double kMeanSaturation = 1e5;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// log2 of a power of two; callers must check is_power_of_two first.
inline int log2_exact(std::size_t n) {
  int s = 0;
  while ((std::size_t{1} << s) < n) ++s;
  return s;
}

}  // namespace polar
