#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polar/channel.hpp"
#include "polar/decoder.hpp"

using namespace polar;

namespace {

// Mother-code spec with the given frozen positions, bypassing design rules.
CodeSpec mother_spec(std::uint32_t n_mother, std::vector<std::uint32_t> frozen) {
  CodeSpec spec;
  spec.n_mother = n_mother;
  spec.n_tx = n_mother;
  spec.frozen_set = std::move(frozen);
  std::vector<Bit> mask(n_mother, 0);
  for (std::uint32_t f : spec.frozen_set) mask[f - 1] = 1;
  for (std::uint32_t i = 1; i <= n_mother; ++i)
    if (!mask[i - 1]) spec.info_set.push_back(i);
  spec.k = static_cast<std::uint32_t>(spec.info_set.size());
  return spec;
}

LlrVector noisy_llrs(const CodeSpec& spec, const BitVector& word, double es_n0_db,
                     FrameRng& rng) {
  const NoiseSpec noise = NoiseSpec::from_es_n0_db(es_n0_db);
  SymbolBlock block = modulate(rate_match(encode(spec, word), spec));
  add_noise(block, noise, rng);
  return rate_recover(demodulate(block, noise), spec);
}

double replay_metric(const CodeSpec& spec, const LlrVector& llrs, const BitVector& decisions,
                     CombineMode mode) {
  const LlrVector leaves = replay_decision_llrs(spec, llrs, decisions, mode);
  double metric = 0.0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const Bit hard = leaves[i] < 0.0 ? 1 : 0;
    if (decisions[i] != hard) metric += std::fabs(leaves[i]);
  }
  return metric;
}

}  // namespace

TEST_CASE("f_combine fixed values") {
  CHECK(f_combine(2.0, -3.0, CombineMode::minsum) == -2.0);
  CHECK(f_combine(0.0, 57.0, CombineMode::minsum) == 0.0);
  CHECK(f_combine(0.0, -3.4, CombineMode::exact) == 0.0);
  // high-precision reference for 2 atanh(tanh^2(1/2))
  CHECK(f_combine(1.0, 1.0, CombineMode::exact) ==
        doctest::Approx(0.43378083048302718703).epsilon(1e-14));
  CHECK(f_combine(kLlrMax, kLlrMax, CombineMode::exact) == kLlrMax);
  CHECK(f_combine(kLlrMax, -kLlrMax, CombineMode::exact) == -kLlrMax);
}

TEST_CASE("f_combine exact agrees with long-double evaluation") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> dist(-12.0, 12.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = dist(gen), b = dist(gen);
    const long double t = std::tanh(static_cast<long double>(a) / 2.0L) *
                          std::tanh(static_cast<long double>(b) / 2.0L);
    const double expect = static_cast<double>(2.0L * std::atanh(t));
    CHECK(f_combine(a, b, CombineMode::exact) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("g_combine fixed values and saturation") {
  CHECK(g_combine(1.5, 2.0, 1) == 0.5);
  CHECK(g_combine(kLlrMax, kLlrMax, 0) == kLlrMax);
  CHECK(g_combine(kLlrMax, -kLlrMax, 1) == -kLlrMax);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = dist(gen), b = dist(gen);
    CHECK(g_combine(a, b, 0) == doctest::Approx(a + b));
    CHECK(g_combine(a, b, 1) == doctest::Approx(b - a));
  }
}

TEST_CASE("sc_decode recovers the punctured worked example from noiseless llrs") {
  const CodeSpec spec = design_code(6, 4, SchemeId::proposed_punctured);
  // +max where the codeword bit is 0, -max where 1, zero on punctured bits
  const BitVector x{0, 1, 0, 1, 1, 0, 1, 0};
  LlrVector llrs(8);
  for (int i = 0; i < 8; ++i) llrs[i] = x[i] ? -kLlrMax : kLlrMax;
  llrs[0] = 0.0;
  llrs[4] = 0.0;
  CHECK(sc_decode(spec, llrs) == BitVector{0, 0, 0, 1, 0, 0, 1, 0});
}

TEST_CASE("sc_decode with everything frozen returns zeros") {
  const CodeSpec spec = mother_spec(8, {1, 2, 3, 4, 5, 6, 7, 8});
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  LlrVector llrs(8);
  for (double& l : llrs) l = dist(gen);
  CHECK(sc_decode(spec, llrs) == BitVector(8, 0));
  CHECK_THROWS_AS(sc_decode(spec, LlrVector(7, 0.0)), std::invalid_argument);
}

TEST_CASE("sc_decode round trips noiseless frames") {
  const CodeSpec spec = design_code(16, 8, SchemeId::proposed_punctured);
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 500; ++trial) {
    const BitVector word = oracles::random_bits(gen, 8);
    const BitVector x = encode(spec, word);
    LlrVector llrs(16);
    for (int i = 0; i < 16; ++i) llrs[i] = x[i] ? -kLlrMax : kLlrMax;
    CHECK(sc_decode(spec, llrs) == expand_information(spec, word));
  }
}

TEST_CASE("list of one matches plain sc bit for bit") {
  const CodeSpec spec = design_code(32, 16, SchemeId::proposed_shortened);
  for (CombineMode mode : {CombineMode::minsum, CombineMode::exact}) {
    FrameRng rng(777, 0, static_cast<std::uint64_t>(mode));
    for (int trial = 0; trial < 1000; ++trial) {
      BitVector word(16);
      for (Bit& b : word) b = rng.next_bit();
      const LlrVector llrs = noisy_llrs(spec, word, 1.0, rng);
      const auto list = scl_decode(spec, llrs, 1, mode);
      REQUIRE(list.size() == 1);
      REQUIRE(list[0].decisions == sc_decode(spec, llrs, mode));
    }
  }
}

TEST_CASE("noiseless list decoding yields a zero-metric transmitted path") {
  const CodeSpec spec = design_code(24, 12, SchemeId::proposed_punctured);
  std::mt19937_64 gen(12);
  for (int list_size : {1, 4, 16}) {
    const BitVector word = oracles::random_bits(gen, 12);
    const BitVector x = encode(spec, word);
    LlrVector llrs(spec.n_mother);
    for (std::uint32_t i = 0; i < spec.n_mother; ++i) llrs[i] = x[i] ? -kLlrMax : kLlrMax;
    for (std::uint32_t p : spec.pattern_set) llrs[p - 1] = 0.0;
    const auto list = scl_decode(spec, llrs, list_size);
    CHECK(list.front().metric == 0.0);
    CHECK(list.front().decisions == expand_information(spec, word));
    for (std::size_t r = 1; r < list.size(); ++r) CHECK(list[r].metric >= list[r - 1].metric);
  }
}

TEST_CASE("list paths keep zeros on frozen positions and nonnegative sorted metrics") {
  const CodeSpec spec = design_code(48, 24, SchemeId::proposed_punctured);
  FrameRng rng(13, 0, 0);
  for (int trial = 0; trial < 50; ++trial) {
    BitVector word(24);
    for (Bit& b : word) b = rng.next_bit();
    const LlrVector llrs = noisy_llrs(spec, word, 0.0, rng);
    const auto list = scl_decode(spec, llrs, 8);
    REQUIRE(list.size() == 8);
    double prev = 0.0;
    for (const auto& path : list) {
      CHECK(path.metric >= 0.0);
      CHECK(path.metric >= prev);
      prev = path.metric;
      for (std::uint32_t f : spec.frozen_set) CHECK(path.decisions[f - 1] == 0);
    }
  }
}

TEST_CASE("path metric equals the replayed penalty sum") {
  const CodeSpec spec = design_code(32, 16, SchemeId::proposed_punctured);
  for (CombineMode mode : {CombineMode::minsum, CombineMode::exact}) {
    FrameRng rng(14, 1, static_cast<std::uint64_t>(mode));
    for (int trial = 0; trial < 200; ++trial) {
      BitVector word(16);
      for (Bit& b : word) b = rng.next_bit();
      const LlrVector llrs = noisy_llrs(spec, word, 1.0, rng);
      const auto list = scl_decode(spec, llrs, 8, mode);
      for (std::size_t r = 0; r < list.size(); r += 3) {
        const double replayed = replay_metric(spec, llrs, list[r].decisions, mode);
        REQUIRE(list[r].metric == doctest::Approx(replayed).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rank-1 list output matches exhaustive ml on a small mother code") {
  const CodeSpec spec = mother_spec(8, {1, 2, 3, 5});
  FrameRng rng(15, 2, 0);
  int agree = 0;
  const int trials = 2000;
  for (int trial = 0; trial < trials; ++trial) {
    BitVector word(4);
    for (Bit& b : word) b = rng.next_bit();
    const LlrVector llrs = noisy_llrs(spec, word, 3.0, rng);
    const auto list = scl_decode(spec, llrs, 16, CombineMode::exact);
    const BitVector ml = oracles::ml_decode(spec, llrs);
    BitVector rank1(spec.k);
    for (std::size_t i = 0; i < spec.info_set.size(); ++i)
      rank1[i] = list.front().decisions[spec.info_set[i] - 1];
    agree += rank1 == ml;
  }
  CHECK(agree >= trials * 99 / 100);
}

TEST_CASE("doubling the list never hurts within statistical margin") {
  const CodeSpec spec = design_code(64, 32, SchemeId::proposed_punctured);
  const int trials = 10000;
  std::uint64_t err_small = 0, err_large = 0;
  for (int trial = 0; trial < trials; ++trial) {
    FrameRng rng(16, 3, static_cast<std::uint64_t>(trial));
    BitVector word(32);
    for (Bit& b : word) b = rng.next_bit();
    const LlrVector llrs = noisy_llrs(spec, word, 1.5, rng);
    const BitVector truth = expand_information(spec, word);
    err_small += scl_decode(spec, llrs, 2).front().decisions != truth;
    err_large += scl_decode(spec, llrs, 4).front().decisions != truth;
  }
  const double p_small = static_cast<double>(err_small) / trials;
  const double p_large = static_cast<double>(err_large) / trials;
  const double sigma = std::sqrt((p_small * (1 - p_small) + p_large * (1 - p_large)) / trials);
  CHECK(p_large <= p_small + 3.0 * sigma);
}

TEST_CASE("ca_scl_decode selects the crc-passing path") {
  const CodeSpec spec = design_code(64, 32, SchemeId::proposed_shortened);
  const int crc_len = 8;
  FrameRng rng(17, 4, 0);
  BitVector payload(24);
  for (Bit& b : payload) b = rng.next_bit();
  BitVector word = payload;
  const BitVector crc = crc_compute(payload, crc_len);
  word.insert(word.end(), crc.begin(), crc.end());

  const BitVector x = encode(spec, word);
  LlrVector llrs(spec.n_mother);
  for (std::uint32_t i = 0; i < spec.n_mother; ++i) llrs[i] = x[i] ? -kLlrMax : kLlrMax;
  for (std::uint32_t p : spec.pattern_set) llrs[p - 1] = kLlrMax;

  const DecodeResult result = ca_scl_decode(spec, llrs, 8, crc_len);
  REQUIRE(result.status == DecodeStatus::ok);
  CHECK(result.list_rank == 1);
  CHECK(result.chosen_metric == 0.0);
  REQUIRE(result.payload.has_value());
  CHECK(*result.payload == payload);
}

TEST_CASE("ca_scl_decode survives a total erasure") {
  const CodeSpec spec = design_code(64, 32, SchemeId::proposed_punctured);
  const DecodeResult result = ca_scl_decode(spec, LlrVector(spec.n_mother, 0.0), 4, 8);
  CHECK((result.status == DecodeStatus::ok || result.status == DecodeStatus::crc_failure));
  if (result.status == DecodeStatus::crc_failure) CHECK_FALSE(result.payload.has_value());
}

TEST_CASE("crc rescues a path beyond rank one somewhere in a noisy batch") {
  const CodeSpec spec = design_code(64, 32, SchemeId::proposed_punctured);
  const int crc_len = 8;
  bool rescued = false;
  for (int trial = 0; trial < 10000 && !rescued; ++trial) {
    FrameRng rng(18, 5, static_cast<std::uint64_t>(trial));
    BitVector payload(24);
    for (Bit& b : payload) b = rng.next_bit();
    BitVector word = payload;
    const BitVector crc = crc_compute(payload, crc_len);
    word.insert(word.end(), crc.begin(), crc.end());
    const LlrVector llrs = noisy_llrs(spec, word, 1.0, rng);

    const DecodeResult result = ca_scl_decode(spec, llrs, 16, crc_len);
    if (result.status == DecodeStatus::ok && result.list_rank > 1 && *result.payload == payload) {
      // the plain hard-decision pass really did miss this frame
      CHECK(sc_decode(spec, llrs) != expand_information(spec, word));
      rescued = true;
    }
  }
  CHECK(rescued);
}

TEST_CASE("decoder input validation") {
  const CodeSpec spec = design_code(16, 8, SchemeId::proposed_punctured);
  CHECK_THROWS_AS(scl_decode(spec, LlrVector(16, 0.0), 0), ConfigError);
  CHECK_THROWS_AS(scl_decode(spec, LlrVector(5, 0.0), 2), std::invalid_argument);
  CHECK_THROWS_AS(ca_scl_decode(spec, LlrVector(16, 0.0), 2, 8), ConfigError);  // K == crc_len
}
