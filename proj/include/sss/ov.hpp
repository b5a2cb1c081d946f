#pragma once

// Orthogonal Vectors via sparse 1-covers of the disjointness matrix.
//
// A cover certificate is an x-subset S of [d]; its rectangle is
// X = {A : |A|=p, A subset of S} times Y = {B : |B|=q, B disjoint from S},
// monochromatic by construction. A family of certificates is a 1-cover when
// every disjoint (A,B) pair lands in some rectangle. Sparsity
// z*(C(x,p)/C(d,p) + C(d-x,q)/C(d,q)) drives the detection cost.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sss/numerics.hpp"
#include "sss/rng.hpp"

namespace sss {

struct OneCover {
  int d = 0, p = 0, q = 0, x = 0;
  std::vector<uint32_t> certificates;  // x-subsets of [d] as bitmasks
  bool analytic_precondition = true;   // p+q <= d/2 held at build time
};

struct SparsityReport {
  int d = 0, p = 0, q = 0, x = 0;
  int64_t z = 0;
  double sparsity = 0.0;
  double per_rectangle = 0.0;  // C(x,p)/C(d,p) + C(d-x,q)/C(d,q)
  double analytic_bound = 0.0;
  double floor_value = 0.0;    // 2^d / C(d, d/4); 0 when d % 4 != 0

  std::string csv_row() const {
    std::ostringstream os;
    os << d << ',' << p << ',' << q << ',' << x << ',' << z << ',' << sparsity << ','
       << analytic_bound << ',' << floor_value << ','
       << (analytic_bound > 0 ? sparsity / analytic_bound : 0.0);
    return os.str();
  }
  static std::string csv_header() {
    return "d,p,q,x,z,sparsity,analytic_bound,floor_value,ratio";
  }
};

inline double sparsity_floor(int d) {
  if (d <= 0 || d % 4 != 0) throw std::invalid_argument("sparsity_floor: d must be a positive multiple of 4");
  return std::ldexp(1.0, d) / (double)binomial_u128(d, d / 4);
}

inline SparsityReport measure_sparsity(const OneCover& cover) {
  SparsityReport r;
  r.d = cover.d; r.p = cover.p; r.q = cover.q; r.x = cover.x;
  r.z = (int64_t)cover.certificates.size();
  r.per_rectangle = binomial(cover.x, cover.p) / binomial(cover.d, cover.p) +
                    binomial(cover.d - cover.x, cover.q) / binomial(cover.d, cover.q);
  r.sparsity = (double)r.z * r.per_rectangle;
  double l = cover.p + cover.q;
  r.analytic_bound =
      std::exp2(cover.d / 2.0 + l - cover.d * entropy(l / (2.0 * cover.d)));
  r.floor_value = (cover.d > 0 && cover.d % 4 == 0) ? sparsity_floor(cover.d) : 0.0;
  return r;
}

namespace detail {

// Visit all k-subsets of the set bits of `universe_mask`, ascending as masks.
template <typename F>
inline void for_each_subset_of_size(uint32_t universe_mask, int k, F&& fn) {
  std::vector<int> bits;
  for (int i = 0; i < 32; ++i)
    if (universe_mask >> i & 1) bits.push_back(i);
  int n = (int)bits.size();
  if (k < 0 || k > n) return;
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  while (true) {
    uint32_t m = 0;
    for (int c : comb) m |= 1u << bits[c];
    fn(m);
    int j = k - 1;
    while (j >= 0 && comb[j] == n - k + j) --j;
    if (j < 0) break;
    ++comb[j];
    for (int c = j + 1; c < k; ++c) comb[c] = comb[c - 1] + 1;
  }
}

inline OneCover build_cover_fixed_x(Rng& rng, int d, int p, int q, int x) {
  int l = p + q;
  if (x < p || x > d - q)
    throw std::invalid_argument("build_cover: infeasible certificate size x");
  double denom = binomial(d - l, x - p);
  if (!(denom > 0)) throw std::invalid_argument("build_cover: infeasible certificate size x");
  double prob = std::min(1.0, 2.0 * d / denom);
  OneCover cov;
  cov.d = d; cov.p = p; cov.q = q; cov.x = x;
  cov.analytic_precondition = (l <= d / 2);
  for_each_subset_of_size((d >= 32 ? 0xffffffffu : ((1u << d) - 1)), x, [&](uint32_t s) {
    if (prob >= 1.0 || rng.chance(prob)) cov.certificates.push_back(s);
  });
  return cov;
}

}  // namespace detail

constexpr int kCoverAutoX = -1;

// Random certificate family. With x = kCoverAutoX, the entropy-driven center
//   x* = round(d*(1/2 + (sigma-1/2)*log2(3)/2 + (1/2-sigma)*(1/2-lambda)))
// is grid-searched +-2 (clamped to [p, d-q]) and the candidate with minimum
// measured sparsity wins; ties go to the smaller x.
inline OneCover build_cover(Rng& rng, int d, int p, int q, int x = kCoverAutoX) {
  if (d < 1 || d > 31) throw std::invalid_argument("build_cover: d out of [1,31]");
  if (p < 0 || q < 0 || p > q) throw std::invalid_argument("build_cover: need 0 <= p <= q");
  if (p + q > d) throw std::invalid_argument("build_cover: p + q > d");
  if (x != kCoverAutoX) return detail::build_cover_fixed_x(rng, d, p, q, x);
  double sigma = p + q > 0 ? (double)p / (p + q) : 0.5;
  double lambda = (double)(p + q) / d;
  int center = (int)std::lround(
      d * (0.5 + (sigma - 0.5) * (std::log2(3.0) / 2.0) + (0.5 - sigma) * (0.5 - lambda)));
  int lo = std::max(p, center - 2), hi = std::min(d - q, center + 2);
  if (lo > hi) { lo = p; hi = d - q; }
  std::optional<OneCover> best;
  double best_sparsity = 0.0;
  for (int cand = lo; cand <= hi; ++cand) {
    OneCover cov = detail::build_cover_fixed_x(rng, d, p, q, cand);
    double s = measure_sparsity(cov).sparsity;
    if (!best || s < best_sparsity) { best = std::move(cov); best_sparsity = s; }
  }
  if (!best) throw std::invalid_argument("build_cover: no feasible certificate size");
  return *best;
}

// Exhaustive: every disjoint (A,B) pair has a certificate S with A inside S
// and B outside. Residency bitsets over [z] per side, then an AND sweep.
inline bool cover_validity(const OneCover& cover) {
  if (cover.d > 16) throw std::invalid_argument("cover_validity: d > 16");
  size_t z = cover.certificates.size();
  size_t words = (z + 63) / 64;
  uint32_t full = cover.d >= 32 ? 0xffffffffu : ((1u << cover.d) - 1);

  std::vector<uint32_t> a_masks, b_masks;
  detail::for_each_subset_of_size(full, cover.p, [&](uint32_t m) { a_masks.push_back(m); });
  detail::for_each_subset_of_size(full, cover.q, [&](uint32_t m) { b_masks.push_back(m); });

  auto residency = [&](const std::vector<uint32_t>& masks, bool inside) {
    std::vector<uint64_t> bits(masks.size() * std::max<size_t>(words, 1), 0);
    for (size_t v = 0; v < masks.size(); ++v)
      for (size_t j = 0; j < z; ++j) {
        bool in = inside ? (masks[v] & ~cover.certificates[j]) == 0
                         : (masks[v] & cover.certificates[j]) == 0;
        if (in) bits[v * words + j / 64] |= 1ull << (j % 64);
      }
    return bits;
  };
  auto a_bits = residency(a_masks, true);
  auto b_bits = residency(b_masks, false);

  for (size_t i = 0; i < a_masks.size(); ++i)
    for (size_t j = 0; j < b_masks.size(); ++j) {
      if (a_masks[i] & b_masks[j]) continue;
      bool covered = false;
      for (size_t w = 0; w < words && !covered; ++w)
        covered = (a_bits[i * words + w] & b_bits[j * words + w]) != 0;
      if (!covered) return false;
    }
  return true;
}

struct OvWitness {
  uint32_t a_index = 0, b_index = 0;
};

// Exact quadratic baseline; first hit in lexicographic index order.
inline std::optional<OvWitness> ov_naive(const std::vector<uint32_t>& a_family,
                                         const std::vector<uint32_t>& b_family) {
  for (uint32_t i = 0; i < a_family.size(); ++i)
    for (uint32_t j = 0; j < b_family.size(); ++j)
      if ((a_family[i] & b_family[j]) == 0) return OvWitness{i, j};
  return std::nullopt;
}

struct OvConfig {
  double afford_multiplier = 4.0;     // affordability cutoff (mult*c*Psi)^c
  uint64_t table_budget = 1ull << 22; // max z^c table cells
};

// One-sided Monte Carlo detection through the cover: partition [d] into c
// random blocks, unify each with the cover dimension by the in-block order,
// bucket vectors by certificate residency, and probe the tuple table. A
// returned witness is always a genuinely disjoint pair; NONE may be a false
// negative (amplify by repetition).
inline std::optional<OvWitness> ov_by_sparsity(Rng& rng, const OneCover& cover,
                                               const std::vector<uint32_t>& a_family,
                                               const std::vector<uint32_t>& b_family,
                                               int d, int p, int q, int c = 1,
                                               OvConfig cfg = {}) {
  if (c < 1 || d % c || p % c || q % c)
    throw std::invalid_argument("ov_by_sparsity: c must divide d, p, q");
  if (cover.d != d / c || cover.p != p / c || cover.q != q / c)
    throw std::invalid_argument("ov_by_sparsity: cover dimensions mismatch");
  if (a_family.empty() || b_family.empty()) return std::nullopt;
  uint64_t z = cover.certificates.size();
  if (z == 0) return std::nullopt;
  // table budget: z^c cells
  uint64_t cells = 1;
  for (int i = 0; i < c; ++i) {
    if (cells > cfg.table_budget / z) {
      throw std::length_error("ov_by_sparsity: table over budget, z=" + std::to_string(z) +
                              " c=" + std::to_string(c));
    }
    cells *= z;
  }

  int db = d / c, pb = p / c, qb = q / c;

  // residency maps over the cover's own coordinate space (shared by blocks)
  std::unordered_map<uint32_t, std::vector<uint32_t>> lmap, rmap;
  for (uint32_t j = 0; j < z; ++j) {
    uint32_t s = cover.certificates[j];
    uint32_t sc = (~s) & (db >= 32 ? 0xffffffffu : ((1u << db) - 1));
    detail::for_each_subset_of_size(s, pb, [&](uint32_t m) { lmap[m].push_back(j); });
    detail::for_each_subset_of_size(sc, qb, [&](uint32_t m) { rmap[m].push_back(j); });
  }

  // random partition of [d] into c blocks; in-block position is the unified coordinate
  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[(int)rng.below((uint64_t)i + 1)]);
  std::vector<int> block_of(d), pos_in_block(d);
  for (int i = 0; i < d; ++i) { block_of[perm[i]] = i / db; pos_in_block[perm[i]] = i % db; }

  double psi = measure_sparsity(cover).sparsity;
  double afford = std::pow(cfg.afford_multiplier * c * std::max(psi, 1.0), c);

  // per-vector: unified sub-mask per block, or nullopt when some block is off-size
  auto split_blocks = [&](uint32_t v, int want) -> std::optional<std::vector<uint32_t>> {
    std::vector<uint32_t> out(c, 0);
    std::vector<int> cnt(c, 0);
    for (int i = 0; i < d; ++i)
      if (v >> i & 1) {
        out[block_of[i]] |= 1u << pos_in_block[i];
        cnt[block_of[i]]++;
      }
    for (int i = 0; i < c; ++i)
      if (cnt[i] != want) return std::nullopt;
    return out;
  };

  // tuple table: flat for c = 1, hashed tuples otherwise
  std::vector<uint32_t> flat;
  std::unordered_map<uint64_t, uint32_t> hashed;
  if (c == 1) flat.assign(z, UINT32_MAX);
  auto mark = [&](uint64_t key, uint32_t ai) {
    if (c == 1) { if (flat[key] == UINT32_MAX) flat[key] = ai; }
    else hashed.emplace(key, ai);
  };
  auto probe = [&](uint64_t key) -> uint32_t {
    if (c == 1) return flat[key];
    auto it = hashed.find(key);
    return it == hashed.end() ? UINT32_MAX : it->second;
  };
  std::vector<const std::vector<uint32_t>*> lists(c);

  auto gather = [&](std::unordered_map<uint32_t, std::vector<uint32_t>>& map,
                    const std::vector<uint32_t>& parts) -> bool {
    double prod = 1.0;
    for (int i = 0; i < c; ++i) {
      auto it = map.find(parts[i]);
      if (it == map.end() || it->second.empty()) return false;
      lists[i] = &it->second;
      prod *= (double)it->second.size();
      if (prod > afford) return false;
    }
    return true;
  };

  // mark tuples touched by affordable A vectors
  for (uint32_t ai = 0; ai < a_family.size(); ++ai) {
    if ((int)std::popcount(a_family[ai]) != p)
      throw std::invalid_argument("ov_by_sparsity: A family cardinality mismatch");
    auto parts = split_blocks(a_family[ai], pb);
    if (!parts || !gather(lmap, *parts)) continue;
    std::vector<size_t> cursor(c, 0);
    while (true) {
      uint64_t key = 0;
      for (int i = 0; i < c; ++i) key = key * z + (*lists[i])[cursor[i]];
      mark(key, ai);
      int i = c - 1;
      while (i >= 0 && ++cursor[i] == lists[i]->size()) cursor[i--] = 0;
      if (i < 0) break;
    }
  }

  for (uint32_t bi = 0; bi < b_family.size(); ++bi) {
    if ((int)std::popcount(b_family[bi]) != q)
      throw std::invalid_argument("ov_by_sparsity: B family cardinality mismatch");
    auto parts = split_blocks(b_family[bi], qb);
    if (!parts || !gather(rmap, *parts)) continue;
    std::vector<size_t> cursor(c, 0);
    while (true) {
      uint64_t key = 0;
      for (int i = 0; i < c; ++i) key = key * z + (*lists[i])[cursor[i]];
      uint32_t hit = probe(key);
      if (hit != UINT32_MAX) {
        // rectangle monochromaticity makes the pair disjoint; check anyway
        if ((a_family[hit] & b_family[bi]) != 0)
          throw std::logic_error("ov_by_sparsity: cover produced an intersecting pair");
        return OvWitness{hit, bi};
      }
      int i = c - 1;
      while (i >= 0 && ++cursor[i] == lists[i]->size()) cursor[i--] = 0;
      if (i < 0) break;
    }
  }
  return std::nullopt;
}

// Repetition wrapper; success probability amplifies to near one on YES inputs.
inline std::optional<OvWitness> ov_amplified(Rng& rng, const OneCover& cover,
                                             const std::vector<uint32_t>& a_family,
                                             const std::vector<uint32_t>& b_family,
                                             int d, int p, int q, int c, uint64_t trials,
                                             OvConfig cfg = {}) {
  for (uint64_t r = 0; r < trials; ++r) {
    auto w = ov_by_sparsity(rng, cover, a_family, b_family, d, p, q, c, cfg);
    if (w) return w;
  }
  return std::nullopt;
}

}  // namespace sss
