// Bit-reversal permutation, polar transform and CRC primitives.

#pragma once

#include <cstdint>

#include "polar/types.hpp"

namespace polar {

// Index permutation over {1..N}; entries are 1-based.
using Permutation = std::vector<std::uint32_t>;

// Permutation of length 2^n whose entry at position i is 1 + rev_n(i-1),
// rev_n reversing the n-bit binary representation.
Permutation bit_reversal_permutation(int n);

// Codeword x = v * T_N over GF(2), T_N the n-fold Kronecker power of the
// standard 2x2 lower-triangular kernel. Computed by the n-stage butterfly,
// O(N log N). The input is not modified. Throws std::invalid_argument if the
// length is not a power of two or exceeds 2^kMaxStages.
BitVector polar_transform(const BitVector& v);

// CRC remainder of the payload, appended systematically by the caller.
// Supported lengths: 8, 16, 24 (LTE generator family, CRC24A for 24).
// MSB-first shift register, zero initial state, no reflection, no final xor.
BitVector crc_compute(const BitVector& payload, int crc_len);

// True iff the last crc_len bits of word equal crc_compute of the rest.
bool crc_check(const BitVector& word, int crc_len);

}  // namespace polar
