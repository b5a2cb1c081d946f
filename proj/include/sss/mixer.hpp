#pragma once

// Mixer measurement and the two preprocessing solvers that exploit it.
//
// A mixer M is a subset of indices; its compression rate is
//   eps = 1 - log2(|w(2^M)|) / |M|
// (zero for the empty mixer). A compressible mixer shrinks the subset-sum
// table of everything glued to it, which the win-win solver turns into a
// smaller exact four-list join. Independently, targets reachable only by
// very small or very large cardinalities fall to repeated random
// four-partitions with exact-cardinality lists.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sss/index_set.hpp"
#include "sss/instance.hpp"
#include "sss/int128.hpp"
#include "sss/meter.hpp"
#include "sss/numerics.hpp"
#include "sss/rng.hpp"
#include "sss/sumset.hpp"

namespace sss {

struct MixerStats {
  int m = 0;
  int64_t distinct = 1;
  double epsilon = 0.0;
};

// All 2^|Q| subset sums of Q, deduplicated by value; first (lowest) mask kept
// as witness for each value. Values returned sorted ascending.
inline std::vector<u128> dedup_subset_sums(const SubsetSumInstance& inst, IndexSet q,
                                           std::vector<uint64_t>* witness_masks = nullptr) {
  int m = q.count();
  if (m > 26) throw std::invalid_argument("dedup_subset_sums: |Q| > 26");
  auto idx = q.to_indices();
  std::vector<std::pair<u128, uint64_t>> sums;
  sums.reserve(1ull << m);
  for (uint64_t sub = 0; sub < (1ull << m); ++sub) {
    uint64_t mask = 0;
    u128 s = 0;
    for (int i = 0; i < m; ++i)
      if (sub >> i & 1) { mask |= 1ull << idx[i]; s += inst.weights[idx[i]]; }
    sums.emplace_back(s, mask);
  }
  std::sort(sums.begin(), sums.end());
  std::vector<u128> vals;
  if (witness_masks) witness_masks->clear();
  for (auto& [v, mask] : sums) {
    if (vals.empty() || vals.back() != v) {
      vals.push_back(v);
      if (witness_masks) witness_masks->push_back(mask);
    }
  }
  return vals;
}

inline MixerStats measure_mixer(const SubsetSumInstance& inst, IndexSet m_set) {
  MixerStats st;
  st.m = m_set.count();
  if (st.m == 0) return st;
  st.distinct = (int64_t)dedup_subset_sums(inst, m_set).size();
  st.epsilon = 1.0 - std::log2((double)st.distinct) / st.m;
  return st;
}

// Exact solve that banks on a compressible mixer: partition the remaining
// indices so that three of the four join lists have round((1-eps0*mu)n/4)
// elements each and the mixer side absorbs the rest. Answer is definitive in
// both directions.
inline std::optional<Solution> win_win_solve(const SubsetSumInstance& inst, IndexSet m_set,
                                             double eps0, double mu,
                                             MemoryMeter* meter = nullptr) {
  IndexSet rest = IndexSet::full(inst.n) - m_set;
  auto rest_idx = rest.to_indices();
  int k = (int)std::lround((1.0 - eps0 * mu) * inst.n / 4.0);
  if (3 * k > (int)rest_idx.size()) k = (int)rest_idx.size() / 3;
  if (k < 0) k = 0;
  int l1 = (int)rest_idx.size() - 3 * k;

  auto take = [&](int from, int len) {
    IndexSet s;
    for (int i = 0; i < len; ++i) s = s | IndexSet::single(rest_idx[from + i]);
    return s;
  };
  IndexSet l1_set = take(0, l1), l2_set = take(l1, k);
  IndexSet r1_set = take(l1 + k, k), r2_set = take(l1 + 2 * k, k);

  std::vector<uint64_t> q_masks, l2_masks, r1_masks, r2_masks;
  auto q_vals = dedup_subset_sums(inst, l1_set | m_set, &q_masks);
  auto l2_vals = dedup_subset_sums(inst, l2_set, &l2_masks);
  auto r1_vals = dedup_subset_sums(inst, r1_set, &r1_masks);
  auto r2_vals = dedup_subset_sums(inst, r2_set, &r2_masks);
  if (meter) {
    meter->add((int64_t)(q_vals.size() + l2_vals.size() + r1_vals.size() + r2_vals.size()));
  }
  auto w = four_sum(q_vals, l2_vals, r1_vals, r2_vals, inst.target, meter);
  std::optional<Solution> out;
  if (w) {
    uint64_t mask = q_masks[w->ia] | l2_masks[w->ib] | r1_masks[w->ic] | r2_masks[w->id];
    out = Solution{IndexSet(mask), inst.target};
  }
  if (meter) {
    meter->release((int64_t)(q_vals.size() + l2_vals.size() + r1_vals.size() + r2_vals.size()));
  }
  return out;
}

// Search for a solution of exact cardinality ell via random four-partitions.
// Each trial shuffles [n] into four near-equal parts and joins the four
// exact-cardinality sum lists; the cardinality split ell = k0+k1+k2+k3
// rotates with the trial index so uneven remainders move around. One-sided:
// nullopt after `trials` failures is not a certificate of absence.
inline std::optional<Solution> small_lambda_solve(const SubsetSumInstance& inst, int ell,
                                                  uint64_t trials, Rng& rng,
                                                  MemoryMeter* meter = nullptr) {
  if (ell < 0 || ell > inst.n) throw std::invalid_argument("small_lambda_solve: bad cardinality");
  if (ell == 0) return inst.target == 0 ? std::optional<Solution>(Solution{IndexSet(0), 0})
                                        : std::nullopt;
  std::vector<int> order(inst.n);
  std::iota(order.begin(), order.end(), 0);
  for (uint64_t trial = 0; trial < trials; ++trial) {
    for (int i = inst.n - 1; i > 0; --i)
      std::swap(order[i], order[(int)rng.below((uint64_t)i + 1)]);
    int base = inst.n / 4, rem = inst.n % 4;
    int kbase = ell / 4, krem = ell % 4;
    int pos = 0;
    std::vector<u128> vals[4];
    std::vector<uint64_t> masks[4];
    bool feasible = true;
    for (int part = 0; part < 4; ++part) {
      int plen = base + (part < rem ? 1 : 0);
      int want = kbase + ((part + (int)(trial % 4)) % 4 < krem ? 1 : 0);
      if (want > plen) { feasible = false; break; }
      // all subsets of this part with exactly `want` elements
      std::vector<int> comb(want);
      std::iota(comb.begin(), comb.end(), 0);
      while (true) {
        uint64_t mask = 0;
        u128 s = 0;
        for (int c : comb) { mask |= 1ull << order[pos + c]; s += inst.weights[order[pos + c]]; }
        vals[part].push_back(s);
        masks[part].push_back(mask);
        int j = want - 1;
        while (j >= 0 && comb[j] == plen - want + j) --j;
        if (j < 0) break;
        ++comb[j];
        for (int c = j + 1; c < want; ++c) comb[c] = comb[c - 1] + 1;
      }
      pos += plen;
    }
    if (!feasible) continue;
    int64_t footprint = 0;
    for (auto& v : vals) footprint += (int64_t)v.size();
    if (meter) meter->add(footprint);
    auto w = four_sum(vals[0], vals[1], vals[2], vals[3], inst.target, meter);
    if (meter) meter->release(footprint);
    if (w) {
      uint64_t mask = masks[0][w->ia] | masks[1][w->ib] | masks[2][w->ic] | masks[3][w->id];
      return Solution{IndexSet(mask), inst.target};
    }
  }
  return std::nullopt;
}

inline uint64_t default_small_lambda_trials(int n) { return 10ull * n * n; }

}  // namespace sss
