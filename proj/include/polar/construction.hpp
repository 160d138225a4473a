// Code construction: reliability evolution, pattern-induced input-bit sets,
// and the design rules producing a CodeSpec for each rate-matching scheme.

#pragma once

#include <cstdint>
#include <string>

#include "polar/core.hpp"

namespace polar {

enum class PatternKind { none, punctured, shortened };

// The seven design rules. The bitrev schemes derive their pattern from the
// bit-reversal permutation and reuse the stored mother-code reliability
// order; the dega schemes re-run the mean evolution with the pattern folded
// into the channel; the remaining ones are literal low-complexity baselines.
enum class SchemeId {
  proposed_punctured,
  proposed_shortened,
  dega_punctured,
  dega_shortened,
  relorder_punctured,
  first_punctured_nodega,
  last_shortened_nodega,
};

const char* to_string(SchemeId scheme);
const char* to_string(PatternKind kind);
SchemeId scheme_from_string(const std::string& name);
bool scheme_is_shortening(SchemeId scheme);

// Complete description of a (possibly rate-matched) polar code. All sets are
// sorted and 1-based: frozen/info index input bits, pattern indexes code bits.
struct CodeSpec {
  std::uint32_t n_tx = 0;      // transmitted length N
  std::uint32_t k = 0;         // information length K, CRC included
  std::uint32_t n_mother = 0;  // mother code length, power of two
  std::vector<std::uint32_t> frozen_set;
  std::vector<std::uint32_t> info_set;
  std::vector<std::uint32_t> pattern_set;
  PatternKind pattern_kind = PatternKind::none;
  SchemeId scheme = SchemeId::proposed_punctured;
};

struct ReliabilityProfile {
  std::vector<double> means;  // per input bit, 0-based storage
  Permutation order;          // 1-based positions, ascending reliability
};

// Propagates per-code-bit L-density means right to left through the n-stage
// graph: the check-side output applies the phi-function rule, the sum-side
// output adds the two means. Means saturate at kMeanSaturation.
// Throws std::domain_error on negative inputs, std::invalid_argument on a
// non-power-of-two length.
std::vector<double> ga_evolve(const std::vector<double>& channel_means);

// Stable ascending sort of positions by mean; ties keep the smaller index.
Permutation reliability_order(const std::vector<double>& means);

// Input bits whose decoding LLR is identically zero when the given code bits
// are punctured. Same size as the pattern.
std::vector<std::uint32_t> incapable_set(std::uint32_t n_mother,
                                         const std::vector<std::uint32_t>& punctured);

// Input bits whose decoding LLR is infinite when the given code bits are
// shortened (known zeros). Same size as the pattern.
std::vector<std::uint32_t> overcapable_set(std::uint32_t n_mother,
                                           const std::vector<std::uint32_t>& shortened);

struct DesignParams {
  double design_snr_db = 2.0;  // Es/N0 used for the stored reliability order
};

// Uniform per-code-bit L-density mean of the AWGN/QPSK channel at Es/N0.
double design_channel_mean(double es_n0_db);

// Mother-code reliability profile, computed once per (N_m, design SNR) and
// cached; safe for concurrent readers and concurrent idempotent fills.
const ReliabilityProfile& reliability_profile(std::uint32_t n_mother, double design_snr_db);

// Builds the CodeSpec for the requested scheme. Throws InfeasibleDesignError
// when the pattern cannot be frozen at the requested rate and ConfigError on
// invalid parameters.
CodeSpec design_code(std::uint32_t n_tx, std::uint32_t k, SchemeId scheme,
                     const DesignParams& params = {});

// v with u placed on the information set (ascending) and zeros elsewhere.
BitVector expand_information(const CodeSpec& spec, const BitVector& u);

// Mother codeword x = expand_information(spec, u) * T.
BitVector encode(const CodeSpec& spec, const BitVector& u);

std::string codespec_to_json(const CodeSpec& spec);
CodeSpec codespec_from_json(const std::string& text);

// Number of mean-evolution runs so far; lets tests pin down which design
// paths touch the evolution and which use only the stored profile.
std::uint64_t ga_evolve_call_count();

}  // namespace polar
