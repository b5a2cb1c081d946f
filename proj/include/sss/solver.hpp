#pragma once

// The main solver stack: weight-synchronized orthogonal-vectors detection
// over the two-level lists, the size-banded list loop, and the driver that
// dispatches between the low-cardinality, high-structure and representation
// branches. Everything is Monte Carlo one-sided: YES answers carry verified
// witnesses, NO answers can be wrong with the documented probability.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sss/index_set.hpp"
#include "sss/instance.hpp"
#include "sss/int128.hpp"
#include "sss/lists.hpp"
#include "sss/meter.hpp"
#include "sss/mixer.hpp"
#include "sss/numerics.hpp"
#include "sss/ov.hpp"
#include "sss/p4.hpp"
#include "sss/rng.hpp"
#include "sss/sumset.hpp"

namespace sss {

struct SolverConfig {
  double mu = 0.2;                    // mixer fraction |M|/n
  double lambda0 = 0.3;               // below this solution density, random partitioning wins
  double eps0 = 0.15;                 // mixing threshold for the high-structure branch
  int cover_blocks = 1;               // c blocks for the sparse OV table
  uint64_t ov_crossover = 1ull << 10; // |A|*|B| at or below this runs the exact scan
  int64_t cell_cap = 1ll << 22;       // per weight-cell cross-product safety valve
  int64_t residue_combo_cap = 512;    // residue grids larger than this get sampled
  int reps = 100;                     // outer mixer re-samples
  int ov_trials_per_dim = 20;         // sparse OV repetitions = this * d
  double gamma = 0.249999;            // space exponent per free index
  uint64_t small_lambda_trials = 200; // partition re-samples per cardinality (0: 10n^2)
  OvConfig ov;

  static SolverConfig desk() { return SolverConfig{}; }

  // Constants as analyzed; branches other than the list machinery are
  // unreachable at n <= 40 with these, which is the point of documenting them.
  static SolverConfig paper() {
    SolverConfig c;
    c.mu = 0.217;
    c.lambda0 = 0.495;
    c.eps0 = 0.00002;
    c.cover_blocks = 20;
    c.residue_combo_cap = 1;
    c.small_lambda_trials = 0;
    return c;
  }
};

struct ListQuadruple {
  uint32_t l1 = 0, l2 = 0, r2 = 0, r1 = 0;  // member indices into the four lists
};

namespace detail {

struct WeightGroups {
  std::vector<u128> values;       // sorted distinct weights
  std::vector<uint32_t> offsets;  // values.size() + 1
  std::vector<uint32_t> members;  // list indices, ascending within a group
};

inline WeightGroups group_by_weight(const std::vector<ListMember>& list) {
  std::vector<std::pair<u128, uint32_t>> order(list.size());
  for (uint32_t i = 0; i < list.size(); ++i) order[i] = {list[i].weight, i};
  std::sort(order.begin(), order.end());
  WeightGroups g;
  for (auto& [w, i] : order) {
    if (g.values.empty() || g.values.back() != w) {
      g.values.push_back(w);
      g.offsets.push_back((uint32_t)g.members.size());
    }
    g.members.push_back(i);
  }
  g.offsets.push_back((uint32_t)g.members.size());
  return g;
}

inline int64_t group_size(const WeightGroups& g, uint32_t vi) {
  return (int64_t)g.offsets[vi + 1] - g.offsets[vi];
}

}  // namespace detail

// Weight-synchronized OV over the four lists. Distinct left pair-sums are
// walked upward, distinct right pair-sums downward; each collision a + b = t
// yields one OV call over supports inside M. Support families keep the first
// disjoint originating pair per distinct support.
inline std::optional<ListQuadruple> weighted_ov(Rng& rng, const LevelTwoLists& lists,
                                                const SolverConfig& cfg = SolverConfig::desk(),
                                                MemoryMeter* meter = nullptr,
                                                int64_t* cells_skipped = nullptr) {
  if (lists.l1.empty() || lists.l2.empty() || lists.r2.empty() || lists.r1.empty())
    return std::nullopt;
  u128 t = lists.target;
  auto g_l1 = detail::group_by_weight(lists.l1);
  auto g_l2 = detail::group_by_weight(lists.l2);
  auto g_r1 = detail::group_by_weight(lists.r1);
  auto g_r2 = detail::group_by_weight(lists.r2);
  int64_t group_entries = (int64_t)(g_l1.members.size() + g_l2.members.size() +
                                    g_r1.members.size() + g_r2.members.size());
  if (meter) meter->add(group_entries);

  auto mixer_idx = lists.part_m.to_indices();
  int d = (int)mixer_idx.size();
  int sp = lists.s, sq = lists.lambda_count - lists.s;
  std::optional<OneCover> cover;

  std::optional<ListQuadruple> found;
  {
    SumsetEnumerator inc(g_l1.values, g_l2.values, SumsetEnumerator::Dir::increasing, true, meter);
    SumsetEnumerator dec(g_r1.values, g_r2.values, SumsetEnumerator::Dir::decreasing, true, meter);
    auto bg = dec.next();
    for (auto ag = inc.next(); ag && bg && !found; ag = inc.next()) {
      u128 a = ag->value;
      if (a > t) break;
      while (bg && a + bg->value > t) bg = dec.next();
      if (!bg || a + bg->value < t) continue;

      // a and b are pinned mod p_L / p_R by the list congruences
      if (a % lists.p_l != (lists.x % lists.p_l))
        throw std::logic_error("weighted_ov: left residue chain broken");
      if ((bg->value + lists.x) % lists.p_r != t % lists.p_r)
        throw std::logic_error("weighted_ov: right residue chain broken");

      int64_t cost_l = 0, cost_r = 0;
      for (auto& [ai, bi] : ag->pairs) cost_l += detail::group_size(g_l1, ai) * detail::group_size(g_l2, bi);
      for (auto& [ai, bi] : bg->pairs) cost_r += detail::group_size(g_r1, ai) * detail::group_size(g_r2, bi);
      if (cost_l > cfg.cell_cap || cost_r > cfg.cell_cap) {
        if (cells_skipped) ++*cells_skipped;
        continue;
      }

      // support families: first disjoint (X, Y) per distinct middle support
      std::vector<uint32_t> a_fam, b_fam;
      std::vector<std::pair<uint32_t, uint32_t>> a_origin, b_origin;
      std::unordered_map<uint32_t, uint32_t> seen_a, seen_b;
      for (auto& [ai, bi] : ag->pairs)
        for (uint32_t xi = g_l1.offsets[ai]; xi < g_l1.offsets[ai + 1]; ++xi)
          for (uint32_t yi = g_l2.offsets[bi]; yi < g_l2.offsets[bi + 1]; ++yi) {
            const auto& xm = lists.l1[g_l1.members[xi]];
            const auto& ym = lists.l2[g_l2.members[yi]];
            if (!xm.witness.disjoint(ym.witness)) continue;
            uint32_t sup = compress_support(ym.witness, mixer_idx);
            if (seen_a.emplace(sup, (uint32_t)a_fam.size()).second) {
              a_fam.push_back(sup);
              a_origin.push_back({g_l1.members[xi], g_l2.members[yi]});
            }
          }
      for (auto& [ai, bi] : bg->pairs)
        for (uint32_t xi = g_r1.offsets[ai]; xi < g_r1.offsets[ai + 1]; ++xi)
          for (uint32_t yi = g_r2.offsets[bi]; yi < g_r2.offsets[bi + 1]; ++yi) {
            const auto& xm = lists.r1[g_r1.members[xi]];
            const auto& ym = lists.r2[g_r2.members[yi]];
            if (!xm.witness.disjoint(ym.witness)) continue;
            uint32_t sup = compress_support(ym.witness, mixer_idx);
            if (seen_b.emplace(sup, (uint32_t)b_fam.size()).second) {
              b_fam.push_back(sup);
              b_origin.push_back({g_r1.members[xi], g_r2.members[yi]});
            }
          }
      if (a_fam.empty() || b_fam.empty()) continue;
      if (meter) meter->add((int64_t)(a_fam.size() + b_fam.size()));

      std::optional<OvWitness> hit;
      if ((uint64_t)a_fam.size() * b_fam.size() <= cfg.ov_crossover) {
        hit = ov_naive(a_fam, b_fam);
      } else {
        if (!cover) cover = build_cover(rng, d, sp, sq);
        int c = cfg.cover_blocks;
        if (c < 1 || d % c || sp % c || sq % c) c = 1;
        hit = ov_amplified(rng, *cover, a_fam, b_fam, d, sp, sq, c,
                           (uint64_t)cfg.ov_trials_per_dim * (uint64_t)d, cfg.ov);
      }
      if (meter) meter->release((int64_t)(a_fam.size() + b_fam.size()));
      if (hit) found = ListQuadruple{a_origin[hit->a_index].first, a_origin[hit->a_index].second,
                                     b_origin[hit->b_index].second, b_origin[hit->b_index].first};
    }
  }
  if (meter) meter->release(group_entries);

  if (found) {
    const IndexSet w1 = lists.l1[found->l1].witness, w2 = lists.l2[found->l2].witness;
    const IndexSet w3 = lists.r2[found->r2].witness, w4 = lists.r1[found->r1].witness;
    IndexSet sets[4] = {w1, w2, w3, w4};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (!sets[i].disjoint(sets[j]))
          throw std::logic_error("weighted_ov: assembled quadruple overlaps");
    u128 sum = lists.l1[found->l1].weight + lists.l2[found->l2].weight +
               lists.r2[found->r2].weight + lists.r1[found->r1].weight;
    if (sum != t) throw std::logic_error("weighted_ov: assembled quadruple misses target");
  }
  return found;
}

enum class Detector { weighted_ov, p4 };

struct SolveDetail {
  uint64_t p_l = 2, p_r = 2, p_prime = 2;
  uint64_t x = 0, x_l = 0, x_r = 0;
  int lambda_count = 0, s = 0, s_l = 0, s_r = 0;
  size_t n_l1 = 0, n_l2 = 0, n_r2 = 0, n_r1 = 0;
  int64_t cells_skipped = 0;
  int64_t combos_tried = 0;
  bool prime_fallback = false;
};

// Integer sizes s with h(s/lc) above the admissibility threshold; the
// balanced size lc/2 is always included so shallow bands stay populated.
inline std::vector<int> admissible_sizes(int lambda_count, int m, int n, double eps_r) {
  if (lambda_count <= 0) return {0};
  int half = lambda_count / 2;
  double thresh = 1.0 - eps_r * m / lambda_count - std::log2((double)n) / n;
  std::vector<int> band;
  for (int s = 0; s < half; ++s)
    if (entropy((double)s / lambda_count) >= thresh) band.push_back(s);
  band.push_back(half);
  return band;
}

// One size guess lc for |S ∩ mixer|: loop the admissible size band, build
// lists per residue choice, detect. Primes are sampled once per call; the
// residue grid is exhausted when small, sampled when large.
inline std::optional<Solution> main_lemma_solve(Rng& rng, const SubsetSumInstance& inst,
                                                IndexSet ml_set, IndexSet m_set, IndexSet mr_set,
                                                int lambda_count, double eps_l, double eps_r,
                                                const SolverConfig& cfg = SolverConfig::desk(),
                                                Detector detector = Detector::weighted_ov,
                                                MemoryMeter* meter = nullptr,
                                                SolveDetail* detail = nullptr) {
  int m = m_set.count();
  if (ml_set.count() != m || mr_set.count() != m)
    throw std::invalid_argument("main_lemma_solve: mixers must have equal size");
  if (lambda_count < 0 || lambda_count > m) return std::nullopt;

  double lambda_eff = m > 0 ? (double)lambda_count / m : 0.0;
  PrimePair primes = sample_level_two_primes(rng, m, lambda_eff, eps_l, eps_r);
  if (detail) {
    detail->p_l = primes.p_l;
    detail->p_r = primes.p_r;
    detail->p_prime = primes.p_prime;
    detail->prime_fallback = primes.fallback;
    detail->lambda_count = lambda_count;
  }

  auto band = admissible_sizes(lambda_count, m, inst.n, eps_r);
  for (int s : band)
    for (int s_l : band)
      for (int s_r : band) {
        LevelTwoTables tables = make_level_two_tables(inst, ml_set, m_set, mr_set, lambda_count,
                                                      s, s_l, s_r, primes, meter);
        u128 grid = (u128)tables.p_l * tables.p_l * tables.p_r;
        bool full_grid = grid <= (u128)cfg.residue_combo_cap;
        int64_t combos = full_grid ? (int64_t)grid : cfg.residue_combo_cap;
        for (int64_t ci = 0; ci < combos; ++ci) {
          uint64_t x, x_l, x_r;
          if (full_grid) {
            x = (uint64_t)(ci % tables.p_l);
            x_l = (uint64_t)(ci / tables.p_l % tables.p_l);
            x_r = (uint64_t)(ci / tables.p_l / tables.p_l);
          } else {
            x = rng.below(tables.p_l);
            x_l = rng.below(tables.p_l);
            x_r = rng.below(tables.p_r);
          }
          LevelTwoLists lists = materialize_level_two_lists(tables, x, x_l, x_r, meter);
          Rng child = rng.split();
          std::optional<IndexSet> witness;
          if (!lists.l1.empty() && !lists.l2.empty() && !lists.r2.empty() && !lists.r1.empty()) {
            if (detail) ++detail->combos_tried;
            if (detector == Detector::weighted_ov) {
              auto quad = weighted_ov(child, lists, cfg, meter,
                                      detail ? &detail->cells_skipped : nullptr);
              if (quad)
                witness = lists.l1[quad->l1].witness | lists.l2[quad->l2].witness |
                          lists.r2[quad->r2].witness | lists.r1[quad->r1].witness;
            } else if (list_entries(lists) <= 4000) {
              NodeWeightedGraph g = build_p4_graph(lists, inst.target, meter);
              auto path = naive_p4_solve(g);
              if (path) witness = decode_p4_path(g, lists, *path).first;
              if (meter) meter->release(graph_entries(g));
            }
          }
          if (meter) meter->release(list_entries(lists));
          if (witness) {
            if ((*witness & ml_set).count() != lambda_count ||
                (*witness & m_set).count() != lambda_count ||
                (*witness & mr_set).count() != lambda_count)
              throw std::logic_error("main_lemma_solve: mixer intersection sizes off");
            if (weight_of(inst, *witness) != inst.target)
              throw std::logic_error("main_lemma_solve: witness misses target");
            if (detail) {
              detail->x = x; detail->x_l = x_l; detail->x_r = x_r;
              detail->s = s; detail->s_l = s_l; detail->s_r = s_r;
              detail->n_l1 = lists.l1.size(); detail->n_l2 = lists.l2.size();
              detail->n_r2 = lists.r2.size(); detail->n_r1 = lists.r1.size();
            }
            if (meter) meter->release(tables.entries());
            return Solution{*witness, inst.target};
          }
        }
        if (meter) meter->release(tables.entries());
      }
  return std::nullopt;
}

struct SolveOutcome {
  std::string branch = "none";  // trivial | small-lambda | win-win | main-lemma | none
  double eps = 0, eps_l = 0, eps_r = 0;
  SolveDetail detail;
  int reps_used = 0;
  bool complemented = false;
  int64_t peak_payload = 0;
};

// Driver. Guesses the solution cardinality; cardinalities above n/2 are
// reached by solving for the complement set (target W - t) when that target
// is representable. Low densities go to random partitioning, structured
// instances to the dedup meet-in-the-middle (which is exact, so its verdict
// is final), everything else through the two-level lists.
inline std::optional<Solution> solve(Rng& rng, const SubsetSumInstance& inst,
                                     const SolverConfig& cfg = SolverConfig::desk(),
                                     Detector detector = Detector::weighted_ov,
                                     MemoryMeter* meter = nullptr,
                                     SolveOutcome* outcome = nullptr) {
  u128 total = inst.total();
  auto record = [&](const char* branch, int variant) {
    if (outcome) {
      outcome->branch = branch;
      outcome->complemented = variant == 1;
      if (meter) outcome->peak_payload = meter->peak;
    }
  };
  if (inst.target == 0) {
    record("trivial", 0);
    return Solution{IndexSet(0), 0};
  }
  if ((u128)inst.target > total) {
    record("none", 0);
    return std::nullopt;
  }

  bool can_complement = total - inst.target < (u128)kWeightLimit;
  std::vector<SubsetSumInstance> variants{inst};
  if (can_complement)
    variants.push_back(SubsetSumInstance(inst.weights, (uint64_t)(total - inst.target)));
  // per-variant cardinality range; without the complement the original
  // instance must cover large solutions itself
  int ell_max = can_complement ? inst.n / 2 : inst.n;

  auto finish = [&](Solution sol, int variant, const char* branch) -> Solution {
    if (variant == 1) sol = Solution{IndexSet::full(inst.n) - sol.subset, inst.target};
    if (weight_of(inst, sol.subset) != inst.target)
      throw std::logic_error("solve: returned witness misses target");
    record(branch, variant);
    return sol;
  };

  uint64_t sl_trials = cfg.small_lambda_trials ? cfg.small_lambda_trials
                                               : default_small_lambda_trials(inst.n);
  for (size_t variant = 0; variant < variants.size(); ++variant)
    for (int ell = 0; ell <= ell_max; ++ell) {
      if (!((double)ell < cfg.lambda0 * inst.n)) continue;
      auto sol = small_lambda_solve(variants[variant], ell, sl_trials, rng, meter);
      if (sol) return finish(*sol, (int)variant, "small-lambda");
    }

  // distinct mixer-intersection guesses induced by the representation-stage
  // cardinalities; both roundings of ell * m / n are kept
  int m = (int)std::lround(cfg.mu * inst.n);
  std::vector<int> rep_lcs;
  for (int ell = 0; ell <= ell_max; ++ell) {
    if ((double)ell < cfg.lambda0 * inst.n) continue;
    double ideal = (double)ell * m / inst.n;
    for (int lc : {(int)std::floor(ideal), (int)std::ceil(ideal)})
      if (lc >= 0 && lc <= m) rep_lcs.push_back(lc);
  }
  std::sort(rep_lcs.begin(), rep_lcs.end());
  rep_lcs.erase(std::unique(rep_lcs.begin(), rep_lcs.end()), rep_lcs.end());

  if (m >= 1 && 3 * m <= inst.n && !rep_lcs.empty()) {
    for (int r = 0; r < cfg.reps; ++r) {
      if (outcome) outcome->reps_used = r + 1;
      IndexSet univ = IndexSet::full(inst.n);
      IndexSet m1 = random_subset(rng, univ, m);
      IndexSet m2 = random_subset(rng, univ - m1, m);
      IndexSet m3 = random_subset(rng, univ - m1 - m2, m);
      struct Cand { IndexSet set; double eps; };
      Cand mix[3] = {{m1, measure_mixer(inst, m1).epsilon},
                     {m2, measure_mixer(inst, m2).epsilon},
                     {m3, measure_mixer(inst, m3).epsilon}};
      std::stable_sort(std::begin(mix), std::end(mix),
                       [](const Cand& a, const Cand& b) { return a.eps < b.eps; });
      if (outcome) {
        outcome->eps = mix[0].eps;
        outcome->eps_l = mix[1].eps;
        outcome->eps_r = mix[2].eps;
      }
      if (mix[2].eps >= cfg.eps0) {
        // dedup meet-in-the-middle over the most structured mixer is exact
        auto sol = win_win_solve(inst, mix[2].set, cfg.eps0, cfg.mu, meter);
        if (sol) return finish(*sol, 0, "win-win");
        record("win-win", 0);
        return std::nullopt;
      }
      for (size_t variant = 0; variant < variants.size(); ++variant)
        for (int lc : rep_lcs) {
          auto sol = main_lemma_solve(rng, variants[variant], mix[1].set, mix[0].set, mix[2].set,
                                      lc, mix[1].eps, mix[2].eps, cfg, detector, meter,
                                      outcome ? &outcome->detail : nullptr);
          if (sol) return finish(*sol, (int)variant, "main-lemma");
        }
    }
  }
  record("none", 0);
  return std::nullopt;
}

inline std::optional<Solution> solve_via_p4(Rng& rng, const SubsetSumInstance& inst,
                                            const SolverConfig& cfg = SolverConfig::desk(),
                                            MemoryMeter* meter = nullptr,
                                            SolveOutcome* outcome = nullptr) {
  return solve(rng, inst, cfg, Detector::p4, meter, outcome);
}

// Time-space trade-off: fix every subset of the last b indices explicitly and
// solve the residual instance; b = 0 degenerates to plain solve on the same
// random stream.
inline std::optional<Solution> solve_with_space_budget(Rng& rng, const SubsetSumInstance& inst,
                                                       double budget_exponent,
                                                       const SolverConfig& cfg = SolverConfig::desk(),
                                                       MemoryMeter* meter = nullptr) {
  int b = (int)std::lround(inst.n - budget_exponent / cfg.gamma);
  if (b < 0 || b > inst.n)
    throw std::invalid_argument("solve_with_space_budget: budget implies b outside [0, n]");
  if (b == 0) return solve(rng, inst, cfg, Detector::weighted_ov, meter);
  int low = inst.n - b;
  std::vector<uint64_t> low_weights(inst.weights.begin(), inst.weights.begin() + low);
  for (uint64_t mask = 0; mask < (1ull << b); ++mask) {
    u128 wx = 0;
    for (int i = 0; i < b; ++i)
      if (mask >> i & 1) wx += inst.weights[low + i];
    if (wx > (u128)inst.target) continue;
    IndexSet high(mask << low);
    if (low == 0) {
      if (wx == (u128)inst.target) return Solution{high, inst.target};
      continue;
    }
    Rng child = rng.split();
    SubsetSumInstance resid(low_weights, (uint64_t)((u128)inst.target - wx));
    auto sol = solve(child, resid, cfg, Detector::weighted_ov, meter);
    if (sol) return Solution{high | sol->subset, inst.target};
  }
  return std::nullopt;
}

}  // namespace sss
