// Rate matching/recovery and the AWGN/QPSK link: modulation, noise, LLRs.

#pragma once

#include "polar/construction.hpp"
#include "polar/rng.hpp"

namespace polar {

// Gray-mapped QPSK places one code bit on each real dimension; with this
// amplitude a complex symbol carries unit energy.
inline constexpr double kQpskAmplitude = 0.70710678118654752440;

// One real sample per transmitted code bit.
struct SymbolBlock {
  std::vector<double> samples;
  double amplitude = kQpskAmplitude;
};

enum class SnrConvention { es_n0, eb_n0 };

const char* to_string(SnrConvention conv);
SnrConvention snr_convention_from_string(const std::string& name);

struct NoiseSpec {
  double sigma = 0.0;  // per-dimension noise standard deviation

  // sigma^2 per dimension = 1 / (2 * 10^(EsN0_dB/10)), Es = 1.
  static NoiseSpec from_es_n0_db(double es_n0_db);
  // Eb = Es / (2 K/N); rate is K/N.
  static NoiseSpec from_eb_n0_db(double eb_n0_db, double rate);
};

// Converts a grid value under the given convention to Es/N0 in dB.
double es_n0_db_from(SnrConvention conv, double snr_db, double rate);

// Deletes the pattern positions of x, preserving the order of the rest.
BitVector rate_match(const BitVector& x, const CodeSpec& spec);

// Reinserts pattern positions into the received LLRs: zero when punctured,
// +kLlrMax when shortened.
LlrVector rate_recover(const LlrVector& llrs, const CodeSpec& spec);

SymbolBlock modulate(const BitVector& bits);

void add_noise(SymbolBlock& block, const NoiseSpec& noise, FrameRng& rng);

// llr_i = 2 a y_i / sigma^2, saturated; positive favours bit 0.
LlrVector demodulate(const SymbolBlock& block, const NoiseSpec& noise);

}  // namespace polar
