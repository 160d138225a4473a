#include "polar/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace polar {

namespace {

double clamp_llr(double x) { return std::clamp(x, -kLlrMax, kLlrMax); }

// Iterative SC schedule over the stage tree. The LLR tree stores the stage of
// size 2^s at offset 2^s - 1, so index 0 is the leaf; channel LLRs live in a
// separate shared array. Partial sums use two trees of the same shape, one
// fed by even leaves and one by odd leaves.
class ScSchedule {
 public:
  ScSchedule(std::uint32_t n_mother, CombineMode mode)
      : size_(n_mother), stages_(log2_exact(n_mother)), mode_(mode) {
    llr_layer_.resize(size_, 0);
    bit_layer_.resize(size_, 0);
    for (std::uint32_t i = 1; i < size_; ++i) {
      std::uint32_t v = i;
      int layer = 0;
      while ((v & 1u) == 0) {
        ++layer;
        v >>= 1;
      }
      llr_layer_[i] = layer;
    }
    for (std::uint32_t i = 0; i < size_; ++i) {
      std::uint32_t v = i >> 1;
      int layer = 0;
      while (v & 1u) {
        ++layer;
        v >>= 1;
      }
      bit_layer_[i] = layer;
    }
  }

  std::uint32_t tree_size() const { return size_ > 1 ? size_ - 1 : 1; }

  // Refreshes the LLR tree for leaf `phi` and returns its decision LLR.
  double propagate(const double* channel, double* tree, const Bit* sum_left,
                   std::uint32_t phi) const {
    if (size_ == 1) return clamp_llr(channel[0]);
    const std::uint32_t half = size_ / 2;
    if (phi == 0) {
      for (std::uint32_t i = 0; i < half; ++i)
        tree[half - 1 + i] = f_combine(channel[i], channel[i + half], mode_);
      f_chain(tree, stages_ - 2);
    } else if (phi == half) {
      for (std::uint32_t i = 0; i < half; ++i)
        tree[half - 1 + i] = g_combine(channel[i], channel[i + half], sum_left[half - 1 + i]);
      f_chain(tree, stages_ - 2);
    } else {
      const int layer = llr_layer_[phi];
      const std::uint32_t sz = 1u << layer;
      // One g step from stage 2sz, then f down to the leaf.
      for (std::uint32_t i = 0; i < sz; ++i)
        tree[sz - 1 + i] = g_combine(tree[2 * sz - 1 + i], tree[3 * sz - 1 + i], sum_left[sz - 1 + i]);
      f_chain(tree, layer - 1);
    }
    return tree[0];
  }

  // Records the decided bit and folds finished subtrees back into the
  // partial-sum trees.
  void commit(Bit* sum_left, Bit* sum_right, std::uint32_t phi, Bit bit) const {
    if (size_ == 1) return;
    if ((phi & 1u) == 0) {
      sum_left[0] = bit;
      return;
    }
    sum_right[0] = bit;
    if (phi == size_ - 1) return;
    const int layers = bit_layer_[phi];
    for (int s = 0; s < layers; ++s) {
      const std::uint32_t sz = 1u << s;
      for (std::uint32_t off = sz - 1; off < 2 * sz - 1; ++off) {
        sum_right[sz + off] = sum_left[off] ^ sum_right[off];
        sum_right[2 * sz + off] = sum_right[off];
      }
    }
    const std::uint32_t sz = 1u << layers;
    for (std::uint32_t off = sz - 1; off < 2 * sz - 1; ++off) {
      sum_left[sz + off] = sum_left[off] ^ sum_right[off];
      sum_left[2 * sz + off] = sum_right[off];
    }
  }

 private:
  void f_chain(double* tree, int top) const {
    for (int s = top; s >= 0; --s) {
      const std::uint32_t sz = 1u << s;
      for (std::uint32_t i = 0; i < sz; ++i)
        tree[sz - 1 + i] = f_combine(tree[2 * sz - 1 + i], tree[3 * sz - 1 + i], mode_);
    }
  }

  std::uint32_t size_;
  int stages_;
  CombineMode mode_;
  std::vector<int> llr_layer_;
  std::vector<int> bit_layer_;
};

std::vector<Bit> frozen_mask(const CodeSpec& spec) {
  std::vector<Bit> mask(spec.n_mother, 0);
  for (std::uint32_t f : spec.frozen_set) mask[f - 1] = 1;
  return mask;
}

void check_llr_length(const CodeSpec& spec, const LlrVector& llrs) {
  if (llrs.size() != spec.n_mother)
    throw std::invalid_argument("decoder: LLR vector length must equal the mother length");
}

double penalty(double llr, Bit decision) {
  // A decision is penalised when it is not the hard decision of its LLR.
  const Bit hard = llr < 0.0 ? 1 : 0;
  return decision == hard ? 0.0 : std::fabs(llr);
}

// Flat per-path storage. Copying a path is a handful of memcpys within
// preallocated arenas; no allocation happens while decoding.
class PathArena {
 public:
  PathArena(std::uint32_t n_mother, std::uint32_t tree_size, int list_size)
      : n_(n_mother),
        tree_(tree_size),
        llr_(static_cast<std::size_t>(list_size) * tree_size),
        sum_left_(static_cast<std::size_t>(list_size) * tree_size),
        sum_right_(static_cast<std::size_t>(list_size) * tree_size),
        decisions_(static_cast<std::size_t>(list_size) * n_mother),
        metric_(list_size, 0.0) {}

  double* llr(int slot) { return llr_.data() + static_cast<std::size_t>(slot) * tree_; }
  Bit* sum_left(int slot) { return sum_left_.data() + static_cast<std::size_t>(slot) * tree_; }
  Bit* sum_right(int slot) { return sum_right_.data() + static_cast<std::size_t>(slot) * tree_; }
  Bit* decisions(int slot) { return decisions_.data() + static_cast<std::size_t>(slot) * n_; }
  double& metric(int slot) { return metric_[slot]; }

  void copy_slot(int from, int to) {
    std::memcpy(llr(to), llr(from), tree_ * sizeof(double));
    std::memcpy(sum_left(to), sum_left(from), tree_);
    std::memcpy(sum_right(to), sum_right(from), tree_);
    std::memcpy(decisions(to), decisions(from), n_);
    metric_[to] = metric_[from];
  }

 private:
  std::size_t n_;
  std::size_t tree_;
  std::vector<double> llr_;
  std::vector<Bit> sum_left_;
  std::vector<Bit> sum_right_;
  std::vector<Bit> decisions_;
  std::vector<double> metric_;
};

struct Candidate {
  double metric;
  int rank;  // parent rank in the current list
  Bit bit;
};

}  // namespace

double f_combine(double a, double b, CombineMode mode) {
  if (mode == CombineMode::minsum) {
    const double mag = std::min(std::fabs(a), std::fabs(b));
    return std::signbit(a) != std::signbit(b) ? -mag : mag;
  }
  const double t = std::tanh(clamp_llr(a) / 2.0) * std::tanh(clamp_llr(b) / 2.0);
  if (t >= 1.0) return kLlrMax;
  if (t <= -1.0) return -kLlrMax;
  return clamp_llr(2.0 * std::atanh(t));
}

double g_combine(double a, double b, Bit u) { return clamp_llr(u ? b - a : b + a); }

BitVector sc_decode(const CodeSpec& spec, const LlrVector& llrs, CombineMode mode) {
  check_llr_length(spec, llrs);
  const ScSchedule schedule(spec.n_mother, mode);
  const std::vector<Bit> frozen = frozen_mask(spec);
  std::vector<double> tree(schedule.tree_size(), 0.0);
  std::vector<Bit> sum_left(schedule.tree_size(), 0), sum_right(schedule.tree_size(), 0);
  BitVector decisions(spec.n_mother, 0);
  for (std::uint32_t phi = 0; phi < spec.n_mother; ++phi) {
    const double leaf = schedule.propagate(llrs.data(), tree.data(), sum_left.data(), phi);
    const Bit bit = frozen[phi] ? Bit{0} : (leaf < 0.0 ? Bit{1} : Bit{0});
    decisions[phi] = bit;
    schedule.commit(sum_left.data(), sum_right.data(), phi, bit);
  }
  return decisions;
}

std::vector<DecoderPath> scl_decode(const CodeSpec& spec, const LlrVector& llrs, int list_size,
                                    CombineMode mode) {
  check_llr_length(spec, llrs);
  if (list_size < 1) throw ConfigError("scl_decode: list size must be >= 1");
  const ScSchedule schedule(spec.n_mother, mode);
  const std::vector<Bit> frozen = frozen_mask(spec);
  PathArena arena(spec.n_mother, schedule.tree_size(), list_size);

  // order[r] = arena slot of the rank-r path.
  std::vector<int> order{0};
  std::vector<double> leaf(list_size, 0.0);
  std::vector<Candidate> cands;
  std::vector<int> child_count(list_size), free_slots, next_order;
  std::vector<char> slot_kept(list_size);
  std::vector<Bit> chosen_bit(list_size);

  for (std::uint32_t phi = 0; phi < spec.n_mother; ++phi) {
    for (std::size_t r = 0; r < order.size(); ++r) {
      const int slot = order[r];
      leaf[r] = schedule.propagate(llrs.data(), arena.llr(slot), arena.sum_left(slot), phi);
    }

    if (frozen[phi]) {
      for (std::size_t r = 0; r < order.size(); ++r) {
        const int slot = order[r];
        arena.metric(slot) += penalty(leaf[r], 0);
        arena.decisions(slot)[phi] = 0;
        schedule.commit(arena.sum_left(slot), arena.sum_right(slot), phi, 0);
      }
      continue;
    }

    cands.clear();
    for (std::size_t r = 0; r < order.size(); ++r) {
      const double m = arena.metric(order[r]);
      cands.push_back({m + penalty(leaf[r], 0), static_cast<int>(r), 0});
      cands.push_back({m + penalty(leaf[r], 1), static_cast<int>(r), 1});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.metric != b.metric) return a.metric < b.metric;
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.bit < b.bit;
    });
    const std::size_t keep = std::min<std::size_t>(cands.size(), static_cast<std::size_t>(list_size));

    // The first surviving child of a parent reuses its slot in place; every
    // further child copies the parent into some slot no survivor claims
    // (a dead path's slot or one the growing list has not touched yet).
    child_count.assign(order.size(), 0);
    for (std::size_t c = 0; c < keep; ++c) ++child_count[cands[c].rank];
    std::fill(slot_kept.begin(), slot_kept.end(), 0);
    for (std::size_t r = 0; r < order.size(); ++r)
      if (child_count[r] > 0) slot_kept[order[r]] = 1;
    free_slots.clear();
    for (int s = 0; s < list_size; ++s)
      if (!slot_kept[s]) free_slots.push_back(s);

    next_order.clear();
    for (std::size_t c = 0; c < keep; ++c) {
      const Candidate& cand = cands[c];
      int slot = order[cand.rank];
      if (child_count[cand.rank] < 0) {  // parent already taken: copy
        const int fresh = free_slots.back();
        free_slots.pop_back();
        arena.copy_slot(slot, fresh);
        slot = fresh;
      } else {
        child_count[cand.rank] = -1;
      }
      chosen_bit[next_order.size()] = cand.bit;
      arena.metric(slot) = cand.metric;
      next_order.push_back(slot);
    }
    for (std::size_t r = 0; r < next_order.size(); ++r) {
      const int slot = next_order[r];
      arena.decisions(slot)[phi] = chosen_bit[r];
      schedule.commit(arena.sum_left(slot), arena.sum_right(slot), phi, chosen_bit[r]);
    }
    order = next_order;
  }

  std::vector<DecoderPath> out;
  out.reserve(order.size());
  for (int slot : order) {
    DecoderPath path;
    path.decisions.assign(arena.decisions(slot), arena.decisions(slot) + spec.n_mother);
    path.metric = arena.metric(slot);
    out.push_back(std::move(path));
  }
  return out;
}

DecodeResult ca_scl_decode(const CodeSpec& spec, const LlrVector& llrs, int list_size, int crc_len,
                           CombineMode mode) {
  if (crc_len > 0 && spec.k <= static_cast<std::uint32_t>(crc_len))
    throw ConfigError("ca_scl_decode: K must exceed the CRC length");
  const std::vector<DecoderPath> paths = scl_decode(spec, llrs, list_size, mode);
  DecodeResult result;
  BitVector info(spec.k);
  for (std::size_t rank = 0; rank < paths.size(); ++rank) {
    for (std::size_t i = 0; i < spec.info_set.size(); ++i)
      info[i] = paths[rank].decisions[spec.info_set[i] - 1];
    if (crc_len == 0 || crc_check(info, crc_len)) {
      result.status = DecodeStatus::ok;
      result.payload = BitVector(info.begin(), info.end() - crc_len);
      result.chosen_metric = paths[rank].metric;
      result.list_rank = static_cast<int>(rank) + 1;
      return result;
    }
  }
  result.status = DecodeStatus::crc_failure;
  result.chosen_metric = paths.front().metric;
  result.list_rank = 0;
  return result;
}

LlrVector replay_decision_llrs(const CodeSpec& spec, const LlrVector& llrs,
                               const BitVector& decisions, CombineMode mode) {
  check_llr_length(spec, llrs);
  if (decisions.size() != spec.n_mother)
    throw std::invalid_argument("replay_decision_llrs: decision length mismatch");
  const ScSchedule schedule(spec.n_mother, mode);
  std::vector<double> tree(schedule.tree_size(), 0.0);
  std::vector<Bit> sum_left(schedule.tree_size(), 0), sum_right(schedule.tree_size(), 0);
  LlrVector leaves(spec.n_mother, 0.0);
  for (std::uint32_t phi = 0; phi < spec.n_mother; ++phi) {
    leaves[phi] = schedule.propagate(llrs.data(), tree.data(), sum_left.data(), phi);
    schedule.commit(sum_left.data(), sum_right.data(), phi, decisions[phi] & 1u);
  }
  return leaves;
}

}  // namespace polar
