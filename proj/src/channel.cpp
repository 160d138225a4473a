#include "polar/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polar {

const char* to_string(SnrConvention conv) {
  return conv == SnrConvention::es_n0 ? "esn0" : "ebn0";
}

SnrConvention snr_convention_from_string(const std::string& name) {
  if (name == "esn0") return SnrConvention::es_n0;
  if (name == "ebn0") return SnrConvention::eb_n0;
  throw ConfigError("unknown SNR convention '" + name + "' (esn0 or ebn0)");
}

NoiseSpec NoiseSpec::from_es_n0_db(double es_n0_db) {
  NoiseSpec spec;
  spec.sigma = std::sqrt(1.0 / (2.0 * std::pow(10.0, es_n0_db / 10.0)));
  return spec;
}

NoiseSpec NoiseSpec::from_eb_n0_db(double eb_n0_db, double rate) {
  if (rate <= 0.0) throw ConfigError("NoiseSpec: rate must be positive");
  return from_es_n0_db(es_n0_db_from(SnrConvention::eb_n0, eb_n0_db, rate));
}

double es_n0_db_from(SnrConvention conv, double snr_db, double rate) {
  if (conv == SnrConvention::es_n0) return snr_db;
  return snr_db + 10.0 * std::log10(2.0 * rate);
}

BitVector rate_match(const BitVector& x, const CodeSpec& spec) {
  if (x.size() != spec.n_mother) throw std::invalid_argument("rate_match: wrong codeword length");
  BitVector out;
  out.reserve(spec.n_tx);
  std::size_t next = 0;
  for (std::uint32_t pos = 1; pos <= spec.n_mother; ++pos) {
    if (next < spec.pattern_set.size() && spec.pattern_set[next] == pos) {
      ++next;
      continue;
    }
    out.push_back(x[pos - 1]);
  }
  return out;
}

LlrVector rate_recover(const LlrVector& llrs, const CodeSpec& spec) {
  if (llrs.size() != spec.n_tx) throw std::invalid_argument("rate_recover: wrong LLR length");
  const double fill = spec.pattern_kind == PatternKind::shortened ? kLlrMax : 0.0;
  LlrVector out(spec.n_mother, fill);
  std::size_t next = 0, src = 0;
  for (std::uint32_t pos = 1; pos <= spec.n_mother; ++pos) {
    if (next < spec.pattern_set.size() && spec.pattern_set[next] == pos) {
      ++next;
      continue;
    }
    out[pos - 1] = llrs[src++];
  }
  return out;
}

SymbolBlock modulate(const BitVector& bits) {
  SymbolBlock block;
  block.samples.reserve(bits.size());
  for (Bit b : bits) block.samples.push_back(block.amplitude * (1.0 - 2.0 * (b & 1u)));
  return block;
}

void add_noise(SymbolBlock& block, const NoiseSpec& noise, FrameRng& rng) {
  if (noise.sigma <= 0.0) throw std::invalid_argument("add_noise: sigma must be positive");
  for (double& s : block.samples) s += rng.next_gaussian(noise.sigma);
}

LlrVector demodulate(const SymbolBlock& block, const NoiseSpec& noise) {
  if (noise.sigma <= 0.0) throw std::invalid_argument("demodulate: sigma must be positive");
  const double scale = 2.0 * block.amplitude / (noise.sigma * noise.sigma);
  LlrVector llrs;
  llrs.reserve(block.samples.size());
  for (double y : block.samples) llrs.push_back(std::clamp(scale * y, -kLlrMax, kLlrMax));
  return llrs;
}

}  // namespace polar
