#pragma once

// Representation lists. A solution S is split as S1..S8 across the partition
// [n] = L | M_L | M | M_R | R; free parts (S1 in L, S8 in R) pair with
// fixed-cardinality mixer parts, and a random congruence prunes each list to
// roughly a 1/p fraction. Single-level reduction (one mixer, two lists) and
// the two-level construction (three mixers, four lists) both live here; the
// joins run over residue buckets, never over raw 2^{L u M} enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sss/index_set.hpp"
#include "sss/instance.hpp"
#include "sss/int128.hpp"
#include "sss/meter.hpp"
#include "sss/mixer.hpp"
#include "sss/numerics.hpp"
#include "sss/rng.hpp"

namespace sss {

namespace detail {

struct Piece {
  uint64_t mask;
  u128 weight;
};

using ResidueTable = std::vector<std::vector<Piece>>;  // residue -> pieces

// All 2^|set| subsets, bucketed by weight mod p.
inline ResidueTable free_subsets_by_residue(const SubsetSumInstance& inst, IndexSet set,
                                            uint64_t p) {
  int l = set.count();
  if (l > 20) throw std::invalid_argument("free_subsets_by_residue: |set| > 20");
  auto idx = set.to_indices();
  ResidueTable table(p);
  std::vector<u128> weight(1ull << l, 0);
  for (uint64_t sub = 0; sub < (1ull << l); ++sub) {
    if (sub) {
      int b = std::countr_zero(sub);
      weight[sub] = weight[sub & (sub - 1)] + inst.weights[idx[b]];
    }
    uint64_t mask = 0;
    for (int i = 0; i < l; ++i)
      if (sub >> i & 1) mask |= 1ull << idx[i];
    table[(uint64_t)(weight[sub] % p)].push_back(Piece{mask, weight[sub]});
  }
  return table;
}

// All k-subsets of `set`, bucketed by weight mod p.
inline ResidueTable ksubsets_by_residue(const SubsetSumInstance& inst, IndexSet set, int k,
                                        uint64_t p) {
  int l = set.count();
  if (k < 0 || k > l) throw std::invalid_argument("ksubsets_by_residue: infeasible k");
  auto idx = set.to_indices();
  ResidueTable table(p);
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  while (true) {
    uint64_t mask = 0;
    u128 w = 0;
    for (int c : comb) { mask |= 1ull << idx[c]; w += inst.weights[idx[c]]; }
    table[(uint64_t)(w % p)].push_back(Piece{mask, w});
    int j = k - 1;
    while (j >= 0 && comb[j] == l - k + j) --j;
    if (j < 0) break;
    ++comb[j];
    for (int c = j + 1; c < k; ++c) comb[c] = comb[c - 1] + 1;
  }
  return table;
}

inline int64_t table_entries(const ResidueTable& t) {
  int64_t n = 0;
  for (auto& bucket : t) n += (int64_t)bucket.size();
  return n;
}

}  // namespace detail

struct ListMember {
  IndexSet witness;
  u128 weight = 0;
};

// Cross-join two residue tables: all pairs whose weights sum to `residue` mod p.
inline std::vector<ListMember> join_residue_tables(const detail::ResidueTable& a,
                                                   const detail::ResidueTable& b,
                                                   uint64_t residue, uint64_t p) {
  std::vector<ListMember> out;
  for (uint64_t ra = 0; ra < p; ++ra) {
    uint64_t rb = (residue + p - ra % p) % p;
    for (const auto& pa : a[ra])
      for (const auto& pb : b[rb])
        out.push_back(ListMember{IndexSet(pa.mask | pb.mask), pa.weight + pb.weight});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-level reduction: one mixer, two lists over a target congruence.

struct WovMember {
  IndexSet witness;
  u128 weight = 0;
  uint32_t support = 0;  // witness ∩ mixer, compressed to mixer positions
};

struct WovInstance {
  std::vector<WovMember> left, right;
  u128 target = 0;
  IndexSet mixer;
  uint64_t prime = 2;
  uint64_t residue = 0;
  double mixer_epsilon = 0.0;
};

inline uint32_t compress_support(IndexSet witness, const std::vector<int>& mixer_idx) {
  uint32_t s = 0;
  for (size_t i = 0; i < mixer_idx.size(); ++i)
    if (witness.test(mixer_idx[i])) s |= 1u << i;
  return s;
}

// Half of [n]\M pairs with quarter-of-M subsets under a random congruence
// mod a prime of order 2^{|M|/2}; the other half targets t - x.
inline WovInstance rep_reduce_single_level(Rng& rng, const SubsetSumInstance& inst,
                                           IndexSet m_set, MemoryMeter* meter = nullptr) {
  int m = m_set.count();
  if (m > 24 || m % 2) throw std::invalid_argument("rep_reduce_single_level: |M| must be even, <= 24");
  if (m % 4) throw std::invalid_argument("rep_reduce_single_level: |M| must be divisible by 4");
  if (!m_set.subset_of(IndexSet::full(inst.n)))
    throw std::invalid_argument("rep_reduce_single_level: M outside [n]");

  IndexSet rest = IndexSet::full(inst.n) - m_set;
  auto rest_idx = rest.to_indices();
  int half = (int)rest_idx.size() / 2;
  IndexSet l_set, r_set;
  for (int i = 0; i < (int)rest_idx.size(); ++i) {
    if (i < half) l_set = l_set | IndexSet::single(rest_idx[i]);
    else r_set = r_set | IndexSet::single(rest_idx[i]);
  }

  uint64_t order = (uint64_t)std::max<long long>(2, std::llround(std::exp2(m / 2.0)));
  uint64_t p = random_prime(rng, order).p;
  uint64_t x = rng.below(p);

  auto l_free = detail::free_subsets_by_residue(inst, l_set, p);
  auto r_free = detail::free_subsets_by_residue(inst, r_set, p);
  auto m_quarter = detail::ksubsets_by_residue(inst, m_set, m / 4, p);
  if (meter)
    meter->add(detail::table_entries(l_free) + detail::table_entries(r_free) +
               detail::table_entries(m_quarter));

  WovInstance wov;
  wov.target = inst.target;
  wov.mixer = m_set;
  wov.prime = p;
  wov.residue = x;
  wov.mixer_epsilon = measure_mixer(inst, m_set).epsilon;
  auto mixer_idx = m_set.to_indices();

  uint64_t t_res = (uint64_t)(inst.target % p);
  for (auto& mem : join_residue_tables(l_free, m_quarter, x, p))
    wov.left.push_back(WovMember{mem.witness, mem.weight, compress_support(mem.witness, mixer_idx)});
  for (auto& mem : join_residue_tables(r_free, m_quarter, (t_res + p - x) % p, p))
    wov.right.push_back(WovMember{mem.witness, mem.weight, compress_support(mem.witness, mixer_idx)});
  if (meter) {
    meter->add((int64_t)(wov.left.size() + wov.right.size()));
    meter->release(detail::table_entries(l_free) + detail::table_entries(r_free) +
                   detail::table_entries(m_quarter));
  }
  return wov;
}

// Exact check over the reduced instance: disjoint supports, weights sum to t.
inline std::optional<std::pair<uint32_t, uint32_t>> solve_wov_naive(const WovInstance& wov) {
  for (uint32_t i = 0; i < wov.left.size(); ++i)
    for (uint32_t j = 0; j < wov.right.size(); ++j) {
      if (wov.left[i].support & wov.right[j].support) continue;
      if (wov.left[i].weight + wov.right[j].weight == wov.target) {
        if (!wov.left[i].witness.disjoint(wov.right[j].witness))
          throw std::logic_error("solve_wov_naive: supports disjoint but witnesses overlap");
        return std::make_pair(i, j);
      }
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Two-level lists.

struct LevelTwoLists {
  std::vector<ListMember> l1, l2, r2, r1;
  IndexSet part_l, part_ml, part_m, part_mr, part_r;
  uint64_t p_l = 2, p_r = 2, p_prime = 2;
  uint64_t x = 0, x_l = 0, x_r = 0;
  int n = 0, lambda_count = 0, s = 0, s_l = 0, s_r = 0;
  double beta = 0.0;
  bool prime_fallback = false;
  u128 target = 0;
  u128 instance_total = 0;
};

// Residue-bucketed halves shared by every (x, x_L, x_R) choice; rebuilt per
// size triple since the balance parameter moves the L/R boundary.
struct LevelTwoTables {
  detail::ResidueTable l_free, ml_small, ml_large, m_small, m_large, mr_large, mr_small, r_free;
  IndexSet part_l, part_ml, part_m, part_mr, part_r;
  uint64_t p_l = 2, p_r = 2, p_prime = 2;
  int n = 0, lambda_count = 0, s = 0, s_l = 0, s_r = 0;
  double beta = 0.0;
  bool prime_fallback = false;
  u128 target = 0;
  u128 instance_total = 0;

  int64_t entries() const {
    return detail::table_entries(l_free) + detail::table_entries(ml_small) +
           detail::table_entries(ml_large) + detail::table_entries(m_small) +
           detail::table_entries(m_large) + detail::table_entries(mr_large) +
           detail::table_entries(mr_small) + detail::table_entries(r_free);
  }
};

struct PrimePair {
  uint64_t p_l = 2, p_r = 2, p_prime = 2;
  bool fallback = false;
};

// p_R of order 2^{(lambda - eps_R)m}, p' of order 2^{(eps_R - eps_L)m},
// p_L = p' * p_R. Degenerate intervals fall back to 2 and set the flag.
inline PrimePair sample_level_two_primes(Rng& rng, int m, double lambda_eff, double eps_l,
                                         double eps_r) {
  PrimePair pp;
  long long r_r = std::llround(std::exp2((lambda_eff - eps_r) * m));
  if (r_r < 2) { pp.p_r = 2; pp.fallback = true; }
  else pp.p_r = random_prime(rng, (uint64_t)r_r).p;
  long long r_p = std::llround(std::exp2((eps_r - eps_l) * m));
  if (r_p < 2) pp.p_prime = 2;
  else pp.p_prime = random_prime(rng, (uint64_t)r_p).p;
  pp.p_l = pp.p_prime * pp.p_r;
  if (pp.p_l % pp.p_r != 0) throw std::logic_error("level-two primes: p_R does not divide p_L");
  return pp;
}

inline LevelTwoTables make_level_two_tables(const SubsetSumInstance& inst, IndexSet ml_set,
                                            IndexSet m_set, IndexSet mr_set, int lambda_count,
                                            int s, int s_l, int s_r, const PrimePair& primes,
                                            MemoryMeter* meter = nullptr) {
  int m = m_set.count();
  if (ml_set.count() != m || mr_set.count() != m)
    throw std::invalid_argument("level-two tables: mixers must have equal size");
  if (!(ml_set.disjoint(m_set) && m_set.disjoint(mr_set) && ml_set.disjoint(mr_set)))
    throw std::invalid_argument("level-two tables: mixers must be disjoint");
  int lc = lambda_count;
  if (lc < 0 || lc > m || s < 0 || s > lc || s_l < 0 || s_l > lc || s_r < 0 || s_r > lc)
    throw std::invalid_argument("level-two tables: infeasible split sizes");

  LevelTwoTables t;
  t.n = inst.n;
  t.lambda_count = lc;
  t.s = s; t.s_l = s_l; t.s_r = s_r;
  t.p_l = primes.p_l; t.p_r = primes.p_r; t.p_prime = primes.p_prime;
  t.prime_fallback = primes.fallback;
  t.target = inst.target;
  t.instance_total = inst.total();
  t.part_ml = ml_set; t.part_m = m_set; t.part_mr = mr_set;

  // balance: left/right free sizes compensate the entropy gap of the M split
  t.beta = entropy((double)s / m) - entropy((double)(lc - s) / m);
  IndexSet rest = IndexSet::full(inst.n) - ml_set - m_set - mr_set;
  auto rest_idx = rest.to_indices();
  int free_total = (int)rest_idx.size();
  int l_size = (int)std::lround((inst.n - 3.0 * m - t.beta * m) / 2.0);
  l_size = std::clamp(l_size, 0, free_total);
  for (int i = 0; i < free_total; ++i) {
    if (i < l_size) t.part_l = t.part_l | IndexSet::single(rest_idx[i]);
    else t.part_r = t.part_r | IndexSet::single(rest_idx[i]);
  }

  t.l_free = detail::free_subsets_by_residue(inst, t.part_l, t.p_l);
  t.ml_small = detail::ksubsets_by_residue(inst, ml_set, s_l, t.p_l);
  t.ml_large = detail::ksubsets_by_residue(inst, ml_set, lc - s_l, t.p_l);
  t.m_small = detail::ksubsets_by_residue(inst, m_set, s, t.p_l);
  t.m_large = detail::ksubsets_by_residue(inst, m_set, lc - s, t.p_r);
  t.mr_large = detail::ksubsets_by_residue(inst, mr_set, lc - s_r, t.p_r);
  t.mr_small = detail::ksubsets_by_residue(inst, mr_set, s_r, t.p_r);
  t.r_free = detail::free_subsets_by_residue(inst, t.part_r, t.p_r);
  if (meter) meter->add(t.entries());
  return t;
}

// The four lists at one residue choice:
//   L1: S1 u S2, w = x_L (mod p_L)          L2: S3 u S4, w = x - x_L (mod p_L)
//   R2: S5 u S6, w = x_R (mod p_R)          R1: S7 u S8, w = t - x - x_R (mod p_R)
inline LevelTwoLists materialize_level_two_lists(const LevelTwoTables& t, uint64_t x,
                                                 uint64_t x_l, uint64_t x_r,
                                                 MemoryMeter* meter = nullptr) {
  LevelTwoLists lists;
  lists.part_l = t.part_l; lists.part_ml = t.part_ml; lists.part_m = t.part_m;
  lists.part_mr = t.part_mr; lists.part_r = t.part_r;
  lists.p_l = t.p_l; lists.p_r = t.p_r; lists.p_prime = t.p_prime;
  lists.x = x; lists.x_l = x_l; lists.x_r = x_r;
  lists.n = t.n;
  lists.lambda_count = t.lambda_count;
  lists.s = t.s; lists.s_l = t.s_l; lists.s_r = t.s_r;
  lists.beta = t.beta;
  lists.prime_fallback = t.prime_fallback;
  lists.target = t.target;
  lists.instance_total = t.instance_total;

  uint64_t t_res_r = (uint64_t)(t.target % t.p_r);
  lists.l1 = join_residue_tables(t.l_free, t.ml_small, x_l % t.p_l, t.p_l);
  lists.l2 = join_residue_tables(t.ml_large, t.m_small, (x + t.p_l - x_l % t.p_l) % t.p_l, t.p_l);
  lists.r2 = join_residue_tables(t.m_large, t.mr_large, x_r % t.p_r, t.p_r);
  lists.r1 = join_residue_tables(t.mr_small, t.r_free,
                                 (t_res_r + 2 * t.p_r - x % t.p_r - x_r % t.p_r) % t.p_r, t.p_r);
  if (meter)
    meter->add((int64_t)(lists.l1.size() + lists.l2.size() + lists.r2.size() + lists.r1.size()));
  return lists;
}

inline int64_t list_entries(const LevelTwoLists& lists) {
  return (int64_t)(lists.l1.size() + lists.l2.size() + lists.r2.size() + lists.r1.size());
}

// Spec'd one-shot form: sample primes and residues, then materialize.
inline LevelTwoLists build_level_two_lists(Rng& rng, const SubsetSumInstance& inst,
                                           IndexSet ml_set, IndexSet m_set, IndexSet mr_set,
                                           int lambda_count, int s, int s_l, int s_r,
                                           MemoryMeter* meter = nullptr) {
  int m = m_set.count();
  double lambda_eff = m > 0 ? (double)lambda_count / m : 0.0;
  double eps_l = measure_mixer(inst, ml_set).epsilon;
  double eps_r = measure_mixer(inst, mr_set).epsilon;
  PrimePair primes = sample_level_two_primes(rng, m, lambda_eff, eps_l, eps_r);
  LevelTwoTables tables =
      make_level_two_tables(inst, ml_set, m_set, mr_set, lambda_count, s, s_l, s_r, primes, meter);
  uint64_t x_l = rng.below(tables.p_l);
  uint64_t x = rng.below(tables.p_l);
  uint64_t x_r = rng.below(tables.p_r);
  LevelTwoLists lists = materialize_level_two_lists(tables, x, x_l, x_r, meter);
  if (meter) meter->release(tables.entries());
  return lists;
}

// Member-wise congruence and cardinality audit; throws on the first breach.
inline void verify_level_two_lists(const LevelTwoLists& lists) {
  auto check = [](const std::vector<ListMember>& members, uint64_t p, uint64_t res,
                  IndexSet fixed_part, int fixed_count, const char* name) {
    for (const auto& mem : members) {
      if ((uint64_t)(mem.weight % p) != res % p)
        throw std::logic_error(std::string(name) + ": congruence violated");
      if ((mem.witness & fixed_part).count() != fixed_count)
        throw std::logic_error(std::string(name) + ": cardinality violated");
    }
  };
  int lc = lists.lambda_count;
  check(lists.l1, lists.p_l, lists.x_l, lists.part_ml, lists.s_l, "L1");
  check(lists.l2, lists.p_l, (lists.x + lists.p_l - lists.x_l % lists.p_l) % lists.p_l,
        lists.part_m, lists.s, "L2");
  check(lists.l2, lists.p_l, (lists.x + lists.p_l - lists.x_l % lists.p_l) % lists.p_l,
        lists.part_ml, lc - lists.s_l, "L2");
  check(lists.r2, lists.p_r, lists.x_r, lists.part_m, lc - lists.s, "R2");
  check(lists.r2, lists.p_r, lists.x_r, lists.part_mr, lc - lists.s_r, "R2");
  uint64_t t_res = (uint64_t)(lists.target % lists.p_r);
  check(lists.r1, lists.p_r,
        (t_res + 2 * lists.p_r - lists.x % lists.p_r - lists.x_r % lists.p_r) % lists.p_r,
        lists.part_mr, lists.s_r, "R1");
}

}  // namespace sss
