#include "polar/construction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace polar {

namespace {

std::atomic<std::uint64_t> g_ga_calls{0};

// Two-regime closed form for phi(x) = 1 - E[tanh(L/2)], L ~ N(x, 2x):
// a corrected exponential below the pivot, exp(alpha*x^gamma + beta) above.
constexpr double kGaAlpha = -0.4527;
constexpr double kGaBeta = 0.0218;
constexpr double kGaGamma = 0.86;
constexpr double kPhiPivot = 0.867861;
constexpr double kPhiAtPivot = 0.6845772418;

double phi(double x) {
  if (x < kPhiPivot) return std::exp(0.0564 * x * x - 0.48560 * x);
  return std::exp(kGaAlpha * std::pow(x, kGaGamma) + kGaBeta);
}

double phi_inv(double t) {
  if (t > kPhiAtPivot) return 4.304964539 * (1.0 - std::sqrt(1.0 + 0.9567131408 * std::log(t)));
  return std::pow((std::log(t) - kGaBeta) / kGaAlpha, 1.0 / kGaGamma);
}

double check_combine_mean(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double t = 1.0 - (1.0 - phi(std::min(a, kMeanSaturation))) * (1.0 - phi(std::min(b, kMeanSaturation)));
  if (t <= 0.0) return kMeanSaturation;
  return std::min(phi_inv(t), kMeanSaturation);
}

int mother_order(std::uint32_t n_mother) {
  if (!is_power_of_two(n_mother) || n_mother > (1u << kMaxStages))
    throw std::invalid_argument("mother length must be a power of two up to 2^20");
  return log2_exact(n_mother);
}

void check_positions(std::uint32_t n_mother, const std::vector<std::uint32_t>& positions) {
  for (std::uint32_t p : positions)
    if (p < 1 || p > n_mother) throw std::domain_error("position outside {1..N_m}");
}

// Flag propagation through the same graph as ga_evolve. upper_any selects the
// check-side rule: true means the flag survives if either input carries it
// (zero LLRs), false means both inputs are needed (infinite LLRs); the
// sum-side output uses the complementary rule.
std::vector<std::uint32_t> propagate_flags(std::uint32_t n_mother,
                                           const std::vector<std::uint32_t>& pattern,
                                           bool upper_any) {
  mother_order(n_mother);
  check_positions(n_mother, pattern);
  std::vector<Bit> flag(n_mother, 0);
  for (std::uint32_t p : pattern) flag[p - 1] = 1;
  for (std::uint32_t dist = n_mother / 2; dist >= 1; dist /= 2) {
    for (std::uint32_t base = 0; base < n_mother; base += 2 * dist) {
      for (std::uint32_t j = base; j < base + dist; ++j) {
        const Bit a = flag[j], b = flag[j + dist];
        if (upper_any) {
          flag[j] = a | b;
          flag[j + dist] = a & b;
        } else {
          flag[j] = a & b;
          flag[j + dist] = a | b;
        }
      }
    }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < n_mother; ++i)
    if (flag[i]) out.push_back(i + 1);
  return out;
}

struct ProfileKey {
  std::uint32_t n_mother;
  std::int64_t snr_milli_db;
  bool operator<(const ProfileKey& o) const {
    return n_mother != o.n_mother ? n_mother < o.n_mother : snr_milli_db < o.snr_milli_db;
  }
};

std::mutex g_profile_mutex;
std::map<ProfileKey, std::shared_ptr<const ReliabilityProfile>>& profile_cache() {
  static std::map<ProfileKey, std::shared_ptr<const ReliabilityProfile>> cache;
  return cache;
}

std::vector<std::uint32_t> sorted(std::vector<std::uint32_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// First `count` entries of the reliability order with the excluded input
// positions skipped.
std::vector<std::uint32_t> least_reliable_excluding(const Permutation& order,
                                                    const std::vector<Bit>& excluded,
                                                    std::uint32_t count) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  for (std::uint32_t pos : order) {
    if (out.size() == count) break;
    if (!excluded[pos - 1]) out.push_back(pos);
  }
  if (out.size() != count) throw InfeasibleDesignError("not enough candidates for the frozen set");
  return out;
}

CodeSpec finish_spec(std::uint32_t n_tx, std::uint32_t k, std::uint32_t n_mother, SchemeId scheme,
                     PatternKind kind, std::vector<std::uint32_t> pattern,
                     std::vector<std::uint32_t> frozen) {
  CodeSpec spec;
  spec.n_tx = n_tx;
  spec.k = k;
  spec.n_mother = n_mother;
  spec.scheme = scheme;
  spec.pattern_kind = kind;
  spec.pattern_set = sorted(std::move(pattern));
  spec.frozen_set = sorted(std::move(frozen));
  std::vector<Bit> is_frozen(n_mother, 0);
  for (std::uint32_t f : spec.frozen_set) is_frozen[f - 1] = 1;
  spec.info_set.reserve(k);
  for (std::uint32_t i = 1; i <= n_mother; ++i)
    if (!is_frozen[i - 1]) spec.info_set.push_back(i);
  if (spec.frozen_set.size() != n_mother - k || spec.info_set.size() != k)
    throw InfeasibleDesignError("frozen set size does not match the rate");
  return spec;
}

}  // namespace

const char* to_string(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::proposed_punctured: return "proposed-punctured";
    case SchemeId::proposed_shortened: return "proposed-shortened";
    case SchemeId::dega_punctured: return "dega-punctured";
    case SchemeId::dega_shortened: return "dega-shortened";
    case SchemeId::relorder_punctured: return "relorder-punctured";
    case SchemeId::first_punctured_nodega: return "firstP-punctured-nodega";
    case SchemeId::last_shortened_nodega: return "lastS-shortened-nodega";
  }
  return "?";
}

const char* to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::none: return "none";
    case PatternKind::punctured: return "punctured";
    case PatternKind::shortened: return "shortened";
  }
  return "?";
}

SchemeId scheme_from_string(const std::string& name) {
  static const std::pair<const char*, SchemeId> table[] = {
      {"proposed-punctured", SchemeId::proposed_punctured},
      {"proposed-shortened", SchemeId::proposed_shortened},
      {"dega-punctured", SchemeId::dega_punctured},
      {"dega-shortened", SchemeId::dega_shortened},
      {"relorder-punctured", SchemeId::relorder_punctured},
      {"firstP-punctured-nodega", SchemeId::first_punctured_nodega},
      {"lastS-shortened-nodega", SchemeId::last_shortened_nodega},
  };
  for (const auto& [text, id] : table)
    if (name == text) return id;
  throw ConfigError("unknown scheme '" + name + "'");
}

bool scheme_is_shortening(SchemeId scheme) {
  return scheme == SchemeId::proposed_shortened || scheme == SchemeId::dega_shortened ||
         scheme == SchemeId::last_shortened_nodega;
}

std::vector<double> ga_evolve(const std::vector<double>& channel_means) {
  const std::size_t size = channel_means.size();
  if (!is_power_of_two(size) || size > (std::size_t{1} << kMaxStages))
    throw std::invalid_argument("ga_evolve: length must be a power of two up to 2^20");
  for (double m : channel_means)
    if (m < 0.0 || !std::isfinite(m)) throw std::domain_error("ga_evolve: means must be finite and >= 0");
  g_ga_calls.fetch_add(1, std::memory_order_relaxed);
  std::vector<double> means = channel_means;
  for (std::size_t dist = size / 2; dist >= 1; dist /= 2) {
    for (std::size_t base = 0; base < size; base += 2 * dist) {
      for (std::size_t j = base; j < base + dist; ++j) {
        const double a = means[j], b = means[j + dist];
        means[j] = check_combine_mean(a, b);
        means[j + dist] = std::min(a + b, kMeanSaturation);
      }
    }
  }
  return means;
}

Permutation reliability_order(const std::vector<double>& means) {
  Permutation order(means.size());
  std::iota(order.begin(), order.end(), 1u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return means[a - 1] < means[b - 1]; });
  return order;
}

std::vector<std::uint32_t> incapable_set(std::uint32_t n_mother,
                                         const std::vector<std::uint32_t>& punctured) {
  return propagate_flags(n_mother, punctured, /*upper_any=*/true);
}

std::vector<std::uint32_t> overcapable_set(std::uint32_t n_mother,
                                           const std::vector<std::uint32_t>& shortened) {
  return propagate_flags(n_mother, shortened, /*upper_any=*/false);
}

double design_channel_mean(double es_n0_db) {
  // 2 a^2 / sigma^2 with a^2 = 1/2 and sigma^2 = 1/(2 Es/N0).
  return 2.0 * std::pow(10.0, es_n0_db / 10.0);
}

const ReliabilityProfile& reliability_profile(std::uint32_t n_mother, double design_snr_db) {
  const ProfileKey key{n_mother, std::llround(design_snr_db * 1000.0)};
  {
    std::lock_guard<std::mutex> lock(g_profile_mutex);
    auto it = profile_cache().find(key);
    if (it != profile_cache().end()) return *it->second;
  }
  auto fresh = std::make_shared<ReliabilityProfile>();
  fresh->means = ga_evolve(std::vector<double>(n_mother, design_channel_mean(design_snr_db)));
  fresh->order = reliability_order(fresh->means);
  std::lock_guard<std::mutex> lock(g_profile_mutex);
  auto [it, inserted] = profile_cache().emplace(key, std::move(fresh));
  return *it->second;
}

CodeSpec design_code(std::uint32_t n_tx, std::uint32_t k, SchemeId scheme,
                     const DesignParams& params) {
  if (n_tx == 0 || k == 0 || k > n_tx) throw ConfigError("design_code: need 0 < K <= N");
  const int order = static_cast<int>(std::ceil(std::log2(static_cast<double>(n_tx))));
  if (order > kMaxStages) throw ConfigError("design_code: N exceeds the supported maximum");
  const std::uint32_t n_mother = 1u << order;
  const std::uint32_t pattern_len = n_mother - n_tx;
  const ReliabilityProfile& profile = reliability_profile(n_mother, params.design_snr_db);

  if (pattern_len == 0) {
    // Full-length mother code: every scheme degenerates to the plain rule.
    std::vector<std::uint32_t> frozen(profile.order.begin(), profile.order.begin() + (n_mother - k));
    return finish_spec(n_tx, k, n_mother, scheme, PatternKind::none, {}, std::move(frozen));
  }

  const bool shortening = scheme_is_shortening(scheme);
  if (!shortening && pattern_len >= n_mother - k)
    throw InfeasibleDesignError("puncturing needs P < N_m - K");
  if (shortening && pattern_len > n_mother - k)
    throw InfeasibleDesignError("shortening needs S <= N_m - K");

  std::vector<std::uint32_t> pattern;
  pattern.reserve(pattern_len);
  std::vector<std::uint32_t> frozen;
  frozen.reserve(n_mother - k);

  // Union of the pattern-induced input positions and the least reliable
  // remaining positions, N - K of them.
  auto freeze_pattern_then_reliability = [&](const std::vector<std::uint32_t>& induced) {
    std::vector<Bit> excluded(n_mother, 0);
    for (std::uint32_t p : induced) excluded[p - 1] = 1;
    frozen = induced;
    auto rest = least_reliable_excluding(profile.order, excluded, n_tx - k);
    frozen.insert(frozen.end(), rest.begin(), rest.end());
  };

  switch (scheme) {
    case SchemeId::proposed_punctured: {
      const Permutation bitrev = bit_reversal_permutation(order);
      pattern.assign(bitrev.begin(), bitrev.begin() + pattern_len);
      // The induced zero-LLR input positions coincide with the pattern, so no
      // graph propagation is needed here.
      freeze_pattern_then_reliability(pattern);
      break;
    }
    case SchemeId::proposed_shortened: {
      const Permutation bitrev = bit_reversal_permutation(order);
      pattern.assign(bitrev.end() - pattern_len, bitrev.end());
      freeze_pattern_then_reliability(pattern);
      break;
    }
    case SchemeId::dega_punctured: {
      for (std::uint32_t i = 1; i <= pattern_len; ++i) pattern.push_back(i);
      std::vector<double> channel(n_mother, design_channel_mean(params.design_snr_db));
      for (std::uint32_t p : pattern) channel[p - 1] = 0.0;
      const Permutation order_p = reliability_order(ga_evolve(channel));
      frozen.assign(order_p.begin(), order_p.begin() + (n_mother - k));
      break;
    }
    case SchemeId::dega_shortened: {
      for (std::uint32_t i = n_mother - pattern_len + 1; i <= n_mother; ++i) pattern.push_back(i);
      std::vector<double> channel(n_mother, design_channel_mean(params.design_snr_db));
      for (std::uint32_t p : pattern) channel[p - 1] = kMeanSaturation;
      const Permutation order_s = reliability_order(ga_evolve(channel));
      // The shortened tail of v is frozen a priori; the rest fills up with
      // the least reliable remaining positions.
      std::vector<Bit> excluded(n_mother, 0);
      for (std::uint32_t p : pattern) {
        excluded[p - 1] = 1;
        frozen.push_back(p);
      }
      auto rest = least_reliable_excluding(order_s, excluded, n_mother - k - pattern_len);
      frozen.insert(frozen.end(), rest.begin(), rest.end());
      break;
    }
    case SchemeId::relorder_punctured: {
      pattern.assign(profile.order.begin(), profile.order.begin() + pattern_len);
      frozen.assign(profile.order.begin(), profile.order.begin() + (n_mother - k));
      break;
    }
    case SchemeId::first_punctured_nodega: {
      for (std::uint32_t i = 1; i <= pattern_len; ++i) pattern.push_back(i);
      freeze_pattern_then_reliability(pattern);
      break;
    }
    case SchemeId::last_shortened_nodega: {
      for (std::uint32_t i = n_mother - pattern_len + 1; i <= n_mother; ++i) pattern.push_back(i);
      freeze_pattern_then_reliability(pattern);
      break;
    }
  }

  return finish_spec(n_tx, k, n_mother, scheme,
                     shortening ? PatternKind::shortened : PatternKind::punctured,
                     std::move(pattern), std::move(frozen));
}

BitVector expand_information(const CodeSpec& spec, const BitVector& u) {
  if (u.size() != spec.info_set.size())
    throw std::invalid_argument("expand_information: wrong information length");
  BitVector v(spec.n_mother, 0);
  for (std::size_t i = 0; i < u.size(); ++i) v[spec.info_set[i] - 1] = u[i] & 1u;
  return v;
}

BitVector encode(const CodeSpec& spec, const BitVector& u) {
  return polar_transform(expand_information(spec, u));
}

std::string codespec_to_json(const CodeSpec& spec) {
  nlohmann::json j;
  j["N"] = spec.n_tx;
  j["K"] = spec.k;
  j["N_m"] = spec.n_mother;
  j["scheme"] = to_string(spec.scheme);
  j["pattern_kind"] = to_string(spec.pattern_kind);
  j["frozen_set"] = spec.frozen_set;
  j["info_set"] = spec.info_set;
  j["pattern_set"] = spec.pattern_set;
  return j.dump(2);
}

CodeSpec codespec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad CodeSpec JSON: ") + e.what());
  }
  CodeSpec spec;
  try {
    spec.n_tx = j.at("N").get<std::uint32_t>();
    spec.k = j.at("K").get<std::uint32_t>();
    spec.n_mother = j.at("N_m").get<std::uint32_t>();
    spec.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    const std::string kind = j.at("pattern_kind").get<std::string>();
    spec.pattern_kind = kind == "none"      ? PatternKind::none
                        : kind == "punctured" ? PatternKind::punctured
                        : kind == "shortened" ? PatternKind::shortened
                                              : throw ConfigError("bad pattern_kind '" + kind + "'");
    spec.frozen_set = j.at("frozen_set").get<std::vector<std::uint32_t>>();
    spec.info_set = j.at("info_set").get<std::vector<std::uint32_t>>();
    spec.pattern_set = j.at("pattern_set").get<std::vector<std::uint32_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad CodeSpec JSON: ") + e.what());
  }
  if (!is_power_of_two(spec.n_mother) || spec.frozen_set.size() + spec.info_set.size() != spec.n_mother ||
      spec.info_set.size() != spec.k || spec.pattern_set.size() != spec.n_mother - spec.n_tx)
    throw ConfigError("inconsistent CodeSpec fields");
  return spec;
}

std::uint64_t ga_evolve_call_count() { return g_ga_calls.load(std::memory_order_relaxed); }

}  // namespace polar
