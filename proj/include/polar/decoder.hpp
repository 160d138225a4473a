// Successive cancellation, list and CRC-aided list decoding over the
// mother-code graph.

#pragma once

#include <optional>

#include "polar/construction.hpp"

namespace polar {

enum class CombineMode { minsum, exact };

// Check-node combination of two LLRs. Exact mode evaluates
// 2 atanh(tanh(a/2) tanh(b/2)) with saturation, minsum the usual
// sign(a) sign(b) min(|a|, |b|) approximation.
double f_combine(double a, double b, CombineMode mode);

// Sum-node combination: b + a for u = 0, b - a for u = 1, saturated.
double g_combine(double a, double b, Bit u);

struct DecoderPath {
  BitVector decisions;  // estimated v over all N_m input bits
  double metric = 0.0;  // accumulated |LLR| penalty, nonnegative
};

enum class DecodeStatus { ok, crc_failure };

struct DecodeResult {
  std::optional<BitVector> payload;  // K - crc_len bits; absent on crc_failure
  DecodeStatus status = DecodeStatus::ok;
  double chosen_metric = 0.0;
  int list_rank = 0;  // 1-based rank of the chosen path in the final list
};

// Plain SC decode: frozen positions forced to zero, information positions
// decided by the sign of the leaf LLR (>= 0 decodes 0). Returns the full
// estimated input vector.
BitVector sc_decode(const CodeSpec& spec, const LlrVector& llrs,
                    CombineMode mode = CombineMode::minsum);

// List decode: every surviving path forks at each information bit, a child
// disagreeing with the local hard decision pays |LLR|; frozen bits extend all
// paths with the same penalty rule. The population grows until it first
// exceeds list_size, then the lowest-metric list_size paths survive (ties
// keep the earlier path). Output is sorted by ascending metric.
std::vector<DecoderPath> scl_decode(const CodeSpec& spec, const LlrVector& llrs, int list_size,
                                    CombineMode mode = CombineMode::minsum);

// List decode followed by CRC selection: returns the payload of the best
// CRC-passing path and its rank, or crc_failure when none passes. A crc_len
// of zero skips the check and picks the rank-1 path.
DecodeResult ca_scl_decode(const CodeSpec& spec, const LlrVector& llrs, int list_size, int crc_len,
                           CombineMode mode = CombineMode::minsum);

// Runs the SC recursion with every decision forced to `decisions` and returns
// the leaf LLR observed at each input position. Useful as an independent
// route to a path metric: summing |LLR| where the decision contradicts the
// hard rule reproduces the metric of that path.
LlrVector replay_decision_llrs(const CodeSpec& spec, const LlrVector& llrs,
                               const BitVector& decisions, CombineMode mode = CombineMode::minsum);

}  // namespace polar
