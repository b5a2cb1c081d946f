#pragma once

// Heap-based sumset enumeration over A+B, emitting each distinct sum exactly
// once together with every realizing index pair, in increasing or decreasing
// order. The heap keeps one frontier pair per element of the smaller list, so
// peak heap payload never exceeds min(|A|,|B|)+1. On top of it: four-list
// 4-SUM, meet-in-the-middle, and the four-quarter split solver
// (2^{n/2} time, 2^{n/4} space), plus the exhaustive Gray-code scan.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sss/instance.hpp"
#include "sss/int128.hpp"
#include "sss/meter.hpp"

namespace sss {

struct SumGroup {
  u128 value = 0;
  std::vector<std::pair<uint32_t, uint32_t>> pairs;  // (index into A, index into B)
  std::pair<uint32_t, uint32_t> first_pair{0, 0};
  uint64_t pair_count = 0;
};

class SumsetEnumerator {
 public:
  enum class Dir { increasing, decreasing };

  SumsetEnumerator(std::span<const u128> a, std::span<const u128> b, Dir dir,
                   bool capture_pairs = true, MemoryMeter* meter = nullptr)
      : dir_(dir), capture_(capture_pairs), meter_(meter) {
    if (a.empty() || b.empty())
      throw std::invalid_argument("sumset enumerator: empty input list");
    swapped_ = a.size() < b.size();
    load(swapped_ ? b : a, big_);
    load(swapped_ ? a : b, small_);
    // one frontier entry per element of the smaller list
    uint32_t start = dir_ == Dir::increasing ? 0 : uint32_t(big_.size() - 1);
    for (uint32_t j = 0; j < small_.size(); ++j)
      push(Entry{big_[start].value + small_[j].value, start, j});
  }

  ~SumsetEnumerator() {
    if (meter_) meter_->release(cur_heap_);
  }

  // Next distinct sum with its realizing pairs; nullopt when exhausted.
  std::optional<SumGroup> next() {
    if (heap_.empty()) return std::nullopt;
    SumGroup g;
    g.value = heap_.front().sum;
    bool first = true;
    while (!heap_.empty() && heap_.front().sum == g.value) {
      Entry e = pop();
      auto pr = original_pair(e);
      // first_pair is the least original (a,b) pair, independent of heap tie order
      if (first) { g.first_pair = pr; first = false; }
      else if (pr < g.first_pair) g.first_pair = pr;
      if (capture_) g.pairs.push_back(pr);
      ++g.pair_count;
      if (dir_ == Dir::increasing) {
        if (e.ai + 1 < big_.size()) push(Entry{big_[e.ai + 1].value + small_[e.bi].value, e.ai + 1, e.bi});
      } else {
        if (e.ai > 0) push(Entry{big_[e.ai - 1].value + small_[e.bi].value, e.ai - 1, e.bi});
      }
    }
    if (capture_) std::sort(g.pairs.begin(), g.pairs.end());
    return g;
  }

  int64_t peak_heap() const { return peak_heap_; }

 private:
  struct Slot {
    u128 value;
    uint32_t orig;
  };
  struct Entry {
    u128 sum;
    uint32_t ai, bi;
  };

  static void load(std::span<const u128> src, std::vector<Slot>& dst) {
    dst.resize(src.size());
    for (uint32_t i = 0; i < src.size(); ++i) dst[i] = Slot{src[i], i};
    std::stable_sort(dst.begin(), dst.end(),
                     [](const Slot& x, const Slot& y) { return x.value < y.value; });
  }

  std::pair<uint32_t, uint32_t> original_pair(const Entry& e) const {
    uint32_t big_orig = big_[e.ai].orig, small_orig = small_[e.bi].orig;
    return swapped_ ? std::make_pair(small_orig, big_orig)
                    : std::make_pair(big_orig, small_orig);
  }

  // true if x pops strictly before y
  bool before(const Entry& x, const Entry& y) const {
    if (x.sum != y.sum) return dir_ == Dir::increasing ? x.sum < y.sum : x.sum > y.sum;
    if (x.ai != y.ai) return x.ai < y.ai;
    return x.bi < y.bi;
  }

  void push(Entry e) {
    heap_.push_back(e);
    std::push_heap(heap_.begin(), heap_.end(),
                   [this](const Entry& u, const Entry& v) { return before(v, u); });
    cur_heap_++;
    if (cur_heap_ > peak_heap_) peak_heap_ = cur_heap_;
    if (meter_) meter_->add(1);
  }

  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(),
                  [this](const Entry& u, const Entry& v) { return before(v, u); });
    Entry e = heap_.back();
    heap_.pop_back();
    cur_heap_--;
    if (meter_) meter_->release(1);
    return e;
  }

  Dir dir_;
  bool capture_;
  bool swapped_;
  MemoryMeter* meter_;
  std::vector<Slot> big_, small_;
  std::vector<Entry> heap_;
  int64_t cur_heap_ = 0, peak_heap_ = 0;
};

struct FourSumWitness {
  uint32_t ia = 0, ib = 0, ic = 0, id = 0;  // indices into the four input lists
};

// One quadruple (a,b,c,d) from A x B x C x D with a+b+c+d = t, found by
// opposed enumeration over A+B (increasing) and C+D (decreasing).
inline std::optional<FourSumWitness> four_sum(std::span<const u128> a, std::span<const u128> b,
                                              std::span<const u128> c, std::span<const u128> d,
                                              u128 t, MemoryMeter* meter = nullptr) {
  if (a.empty() || b.empty() || c.empty() || d.empty()) return std::nullopt;
  SumsetEnumerator inc(a, b, SumsetEnumerator::Dir::increasing, false, meter);
  SumsetEnumerator dec(c, d, SumsetEnumerator::Dir::decreasing, false, meter);
  auto g1 = inc.next();
  auto g2 = dec.next();
  while (g1 && g2) {
    u128 lo = g1->value, hi = g2->value;
    if (lo + hi == t) {
      return FourSumWitness{g1->first_pair.first, g1->first_pair.second,
                            g2->first_pair.first, g2->first_pair.second};
    }
    if (lo + hi < t) g1 = inc.next();
    else g2 = dec.next();
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact solvers

// Exhaustive Gray-code walk; first hit in Gray order.
inline std::optional<Solution> brute_force_solve(const SubsetSumInstance& inst) {
  if (inst.n > 30) throw std::invalid_argument("brute_force_solve: n > 30");
  u128 t = inst.target;
  u128 sum = 0;
  uint64_t mask = 0;
  if (sum == t) return Solution{IndexSet(0), 0};
  uint64_t count = 1ull << inst.n;
  for (uint64_t i = 1; i < count; ++i) {
    int bit = std::countr_zero(i);
    uint64_t gray_bit = 1ull << bit;
    if (mask & gray_bit) { mask ^= gray_bit; sum -= inst.weights[bit]; }
    else { mask ^= gray_bit; sum += inst.weights[bit]; }
    if (sum == t) return Solution{IndexSet(mask), sum};
  }
  return std::nullopt;
}

// Meet in the middle: 2^{n/2} lists, sort one, scan the other.
inline std::optional<Solution> mitm_solve(const SubsetSumInstance& inst,
                                          MemoryMeter* meter = nullptr) {
  if (inst.n > 40) throw std::invalid_argument("mitm_solve: n > 40");
  int nl = inst.n / 2, nr = inst.n - nl;
  std::vector<std::pair<u128, uint64_t>> left;
  left.reserve(1ull << nl);
  for (uint64_t m = 0; m < (1ull << nl); ++m)
    left.emplace_back(weight_of(inst, IndexSet(m)), m);
  std::sort(left.begin(), left.end());
  if (meter) meter->add((int64_t)left.size());
  u128 t = inst.target;
  for (uint64_t m = 0; m < (1ull << nr); ++m) {
    u128 s = weight_of(inst, IndexSet(m << nl));
    if (s > t) continue;
    u128 need = t - s;
    auto it = std::lower_bound(left.begin(), left.end(), std::make_pair(need, uint64_t(0)));
    if (it != left.end() && it->first == need) {
      uint64_t full = it->second | (m << nl);
      if (meter) meter->release((int64_t)left.size());
      return Solution{IndexSet(full), t};
    }
  }
  if (meter) meter->release((int64_t)left.size());
  return std::nullopt;
}

// Four quarter lists, deduplicated by sum, joined by 4-SUM.
inline std::optional<Solution> schroeppel_shamir_solve(const SubsetSumInstance& inst,
                                                       MemoryMeter* meter = nullptr) {
  if (inst.n > 48) throw std::invalid_argument("schroeppel_shamir_solve: n > 48");
  int base = inst.n / 4, rem = inst.n % 4;
  int start = 0;
  std::vector<u128> vals[4];
  std::vector<uint64_t> masks[4];
  for (int q = 0; q < 4; ++q) {
    int len = base + (q < rem ? 1 : 0);
    std::vector<std::pair<u128, uint64_t>> sums;
    sums.reserve(1ull << len);
    for (uint64_t m = 0; m < (1ull << len); ++m) {
      uint64_t mask = m << start;
      sums.emplace_back(weight_of(inst, IndexSet(mask)), mask);
    }
    std::sort(sums.begin(), sums.end());
    for (auto& [v, mask] : sums) {
      if (vals[q].empty() || vals[q].back() != v) {
        vals[q].push_back(v);
        masks[q].push_back(mask);
      }
    }
    if (meter) meter->add((int64_t)vals[q].size());
    start += len;
  }
  auto w = four_sum(vals[0], vals[1], vals[2], vals[3], inst.target, meter);
  std::optional<Solution> out;
  if (w) {
    uint64_t mask = masks[0][w->ia] | masks[1][w->ib] | masks[2][w->ic] | masks[3][w->id];
    out = Solution{IndexSet(mask), inst.target};
  }
  if (meter)
    for (auto& v : vals) meter->release((int64_t)v.size());
  return out;
}

}  // namespace sss
