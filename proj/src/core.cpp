#include "polar/core.hpp"

#include <stdexcept>
#include <string>

namespace polar {

namespace {

std::uint32_t reverse_bits(std::uint32_t value, int width) {
  std::uint32_t out = 0;
  for (int b = 0; b < width; ++b) {
    out = (out << 1) | (value & 1u);
    value >>= 1;
  }
  return out;
}

struct CrcPoly {
  int len;
  std::uint32_t poly;  // generator without the leading term
};

// LTE generator family; 24 bits uses the "A" polynomial.
constexpr CrcPoly kCrcPolys[] = {
    {8, 0x9Bu},
    {16, 0x1021u},
    {24, 0x864CFBu},
};

const CrcPoly& crc_poly(int crc_len) {
  for (const auto& p : kCrcPolys)
    if (p.len == crc_len) return p;
  throw ConfigError("unsupported CRC length " + std::to_string(crc_len) + " (supported: 8, 16, 24)");
}

}  // namespace

Permutation bit_reversal_permutation(int n) {
  if (n < 0 || n > kMaxStages) throw std::invalid_argument("bit_reversal_permutation: order out of range");
  const std::uint32_t size = 1u << n;
  Permutation map(size);
  for (std::uint32_t i = 0; i < size; ++i) map[i] = 1u + reverse_bits(i, n);
  return map;
}

BitVector polar_transform(const BitVector& v) {
  const std::size_t size = v.size();
  if (!is_power_of_two(size) || size > (std::size_t{1} << kMaxStages))
    throw std::invalid_argument("polar_transform: length must be a power of two up to 2^20");
  BitVector x = v;
  for (std::size_t dist = 1; dist < size; dist <<= 1)
    for (std::size_t base = 0; base < size; base += 2 * dist)
      for (std::size_t j = base; j < base + dist; ++j) x[j] ^= x[j + dist];
  return x;
}

BitVector crc_compute(const BitVector& payload, int crc_len) {
  const CrcPoly& g = crc_poly(crc_len);
  if (payload.empty()) throw std::invalid_argument("crc_compute: empty payload");
  const std::uint32_t mask = (crc_len == 32) ? 0xFFFFFFFFu : ((1u << crc_len) - 1u);
  std::uint32_t reg = 0;
  for (Bit b : payload) {
    const std::uint32_t feedback = (b & 1u) ^ ((reg >> (crc_len - 1)) & 1u);
    reg = (reg << 1) & mask;
    if (feedback) reg ^= g.poly;
  }
  BitVector out(static_cast<std::size_t>(crc_len));
  for (int i = 0; i < crc_len; ++i) out[i] = static_cast<Bit>((reg >> (crc_len - 1 - i)) & 1u);
  return out;
}

bool crc_check(const BitVector& word, int crc_len) {
  crc_poly(crc_len);
  if (word.size() <= static_cast<std::size_t>(crc_len))
    throw std::invalid_argument("crc_check: word no longer than the CRC");
  BitVector payload(word.begin(), word.end() - crc_len);
  BitVector expect = crc_compute(payload, crc_len);
  return std::equal(expect.begin(), expect.end(), word.end() - crc_len);
}

}  // namespace polar
