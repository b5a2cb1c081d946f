#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sss/sss.hpp"

using namespace sss;

namespace {

SubsetSumInstance powers_instance(int n, uint64_t target) {
  std::vector<uint64_t> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1ull << i;
  return SubsetSumInstance(w, target);
}

}  // namespace

TEST_CASE("instance generator families") {
  Rng rng(3);
  SubsetSumInstance u = generate_instance(rng, InstanceKind::uniform, 10, 8);
  REQUIRE(u.n == 10);
  for (uint64_t w : u.weights) {
    REQUIRE(w >= 1);
    REQUIRE(w <= 255);
  }
  REQUIRE(u.target >= 1);

  IndexSet planted;
  SubsetSumInstance p = generate_instance(rng, InstanceKind::planted, 14, 20, &planted);
  REQUIRE(planted.count() == 7);
  REQUIRE(weight_of(p, planted) == u128(p.target));

  SubsetSumInstance lm = generate_instance(rng, InstanceKind::low_mixing, 16, 20);
  std::vector<uint64_t> vals = lm.weights;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  REQUIRE(vals.size() <= 2);

  SubsetSumInstance pw = generate_instance(rng, InstanceKind::powers, 12, 5);
  for (int i = 0; i < 12; ++i) REQUIRE(pw.weights[i] == (1ull << i));

  REQUIRE_THROWS_AS(generate_instance(rng, InstanceKind::uniform, 0, 8), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_instance(rng, InstanceKind::uniform, 10, 63), std::invalid_argument);

  REQUIRE(std::string(instance_kind_name(InstanceKind::low_mixing)) == "low-mixing");
  REQUIRE(instance_kind_from("powers") == InstanceKind::powers);
  REQUIRE_FALSE(instance_kind_from("nope").has_value());
}

TEST_CASE("residue tables partition the subset space") {
  SubsetSumInstance inst({3, 5, 9, 11, 2}, 0);
  auto free_t = detail::free_subsets_by_residue(inst, IndexSet(0b10110), 7);
  REQUIRE(free_t.size() == 7);
  REQUIRE(detail::table_entries(free_t) == 8);  // 2^3 subsets
  for (uint64_t r = 0; r < 7; ++r)
    for (const auto& pc : free_t[r]) {
      REQUIRE((uint64_t)(pc.weight % 7) == r);
      REQUIRE(weight_of(inst, IndexSet(pc.mask)) == pc.weight);
      REQUIRE(IndexSet(pc.mask).subset_of(IndexSet(0b10110)));
    }

  auto k_t = detail::ksubsets_by_residue(inst, IndexSet(0b11111), 2, 5);
  REQUIRE(detail::table_entries(k_t) == 10);  // C(5,2)
  for (uint64_t r = 0; r < 5; ++r)
    for (const auto& pc : k_t[r]) {
      REQUIRE(IndexSet(pc.mask).count() == 2);
      REQUIRE((uint64_t)(pc.weight % 5) == r);
    }
  REQUIRE_THROWS_AS(detail::ksubsets_by_residue(inst, IndexSet(0b111), 4, 5),
                    std::invalid_argument);

  // join: all pairs hitting a residue, weights added, masks unioned
  auto free_t5 = detail::free_subsets_by_residue(inst, IndexSet(0b10110), 5);
  auto joined = join_residue_tables(free_t5, k_t, 3, 5);
  REQUIRE_FALSE(joined.empty());
  for (const auto& mem : joined) REQUIRE((uint64_t)(mem.weight % 5) == 3);
}

TEST_CASE("single-level reduction keeps the representation discipline") {
  Rng rng(19);
  SubsetSumInstance inst = powers_instance(12, 0b001010110101);
  IndexSet m_set(0xF);
  auto mixer_idx = m_set.to_indices();

  for (int trial = 0; trial < 10; ++trial) {
    WovInstance wov = rep_reduce_single_level(rng, inst, m_set);
    REQUIRE(wov.prime >= 4);  // order 2^{m/2} = 4, interval [4, 8]
    REQUIRE(wov.prime <= 8);
    REQUIRE(is_prime_u64(wov.prime));
    REQUIRE(wov.residue < wov.prime);
    REQUIRE(wov.mixer == m_set);
    REQUIRE(wov.mixer_epsilon == 0.0);  // powers never compress

    uint64_t t_res = (uint64_t)(wov.target % wov.prime);
    for (const auto& mem : wov.left) {
      REQUIRE((uint64_t)(mem.weight % wov.prime) == wov.residue);
      REQUIRE((mem.witness & m_set).count() == 1);  // m/4 elements from the mixer
      REQUIRE(mem.support == compress_support(mem.witness, mixer_idx));
    }
    for (const auto& mem : wov.right) {
      REQUIRE((uint64_t)(mem.weight % wov.prime) == (t_res + wov.prime - wov.residue) % wov.prime);
      REQUIRE((mem.witness & m_set).count() == 1);
      REQUIRE(mem.support == compress_support(mem.witness, mixer_idx));
    }
  }

  REQUIRE_THROWS_AS(rep_reduce_single_level(rng, inst, IndexSet(0b111)), std::invalid_argument);
  REQUIRE_THROWS_AS(rep_reduce_single_level(rng, inst, IndexSet(0b11)), std::invalid_argument);
  SubsetSumInstance small({1, 2, 3}, 1);
  REQUIRE_THROWS_AS(rep_reduce_single_level(rng, small, IndexSet(0xF)), std::invalid_argument);
}

TEST_CASE("single-level reduction recovers a planted split often enough") {
  // planted solution with |S ∩ M| = m/2; one in ~p residues must line up,
  // so the hit rate over seeds stays far above 1/(4n)
  int n = 12;
  SubsetSumInstance base = powers_instance(n, 0);
  IndexSet m_set(0xF);
  IndexSet s_set(0b100110000110);  // 2 of 4 mixer elements, rest outside
  REQUIRE((s_set & m_set).count() == 2);
  SubsetSumInstance inst(base.weights, (uint64_t)weight_of(base, s_set));

  int hits = 0;
  for (int seed = 0; seed < 400; ++seed) {
    Rng rng(seed);
    WovInstance wov = rep_reduce_single_level(rng, inst, m_set);
    auto pr = solve_wov_naive(wov);
    if (pr) {
      const auto& l = wov.left[pr->first];
      const auto& r = wov.right[pr->second];
      REQUIRE(l.weight + r.weight == wov.target);
      REQUIRE(l.witness.disjoint(r.witness));
      REQUIRE((l.witness | r.witness) == s_set);  // powers: unique representation
      ++hits;
    }
  }
  REQUIRE(hits * 4 * n >= 400);  // frequency >= 1/(4n)
  REQUIRE(hits >= 40);           // empirically ~1/p with p in [4,8]
}

TEST_CASE("level-two prime sampling keeps the divisibility chain") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int m = 2 + (int)rng.below(8);
    double lam = 0.3 + 0.2 * rng.unit();
    double eps_l = 0.2 * rng.unit();
    double eps_r = eps_l + 0.3 * rng.unit();
    PrimePair pp = sample_level_two_primes(rng, m, lam, eps_l, eps_r);
    REQUIRE(pp.p_l == pp.p_prime * pp.p_r);
    REQUIRE(pp.p_l % pp.p_r == 0);
    REQUIRE(pp.p_prime >= 2);
    REQUIRE(pp.p_r >= 2);
    bool degenerate = std::llround(std::exp2((lam - eps_r) * m)) < 2;
    REQUIRE(pp.fallback == degenerate);
    if (!degenerate) REQUIRE(is_prime_u64(pp.p_r));
  }
}

TEST_CASE("two-level lists obey their congruences and cardinalities") {
  Rng rng(11);
  for (int seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    SubsetSumInstance inst = generate_instance(r, InstanceKind::planted, 18, 16);
    IndexSet ml(0b000000000000000111), mm(0b000000000000111000), mr(0b000000000111000000);
    LevelTwoLists lists = build_level_two_lists(r, inst, ml, mm, mr, 2, 1, 1, 1);
    REQUIRE(lists.part_ml == ml);
    REQUIRE(lists.part_l.disjoint(lists.part_r));
    REQUIRE((lists.part_l | lists.part_ml | lists.part_m | lists.part_mr | lists.part_r) ==
            IndexSet::full(18));
    REQUIRE_NOTHROW(verify_level_two_lists(lists));

    if (!lists.l1.empty()) {
      LevelTwoLists bad = lists;
      bad.l1[0].weight += 1;
      REQUIRE_THROWS_AS(verify_level_two_lists(bad), std::logic_error);
    }
    if (!lists.l2.empty()) {
      LevelTwoLists bad = lists;
      bad.l2[0].witness = bad.l2[0].witness | lists.part_ml;  // break the cardinality
      REQUIRE_THROWS_AS(verify_level_two_lists(bad), std::logic_error);
    }
  }
}

TEST_CASE("list sizes concentrate around the congruence prediction") {
  // powers instance, |L| free indices against prime p_L: |L1| should sit
  // near 2^|L| * C(m, s_l) / p_L on average
  double ratio_sum = 0;
  int n_seeds = 50;
  for (int seed = 0; seed < n_seeds; ++seed) {
    Rng rng(seed);
    SubsetSumInstance inst = powers_instance(20, 1);
    IndexSet ml(0xF), mm(0xF0), mr(0xF00);
    LevelTwoLists lists = build_level_two_lists(rng, inst, ml, mm, mr, 2, 1, 1, 1);
    double expected = std::ldexp(1.0, lists.part_l.count()) * binomial(4, 1) / (double)lists.p_l;
    ratio_sum += (double)lists.l1.size() / expected;
  }
  double mean_ratio = ratio_sum / n_seeds;
  REQUIRE(mean_ratio >= 1.0 / 8.0);
  REQUIRE(mean_ratio <= 8.0);
}

TEST_CASE("unhittable residues produce empty lists") {
  // weights 1,2,4,...: part_l = {8, 16} can only reach {0,1,2,3,4} + s_l part;
  // pick x_l outside every achievable residue mod 7
  SubsetSumInstance inst({1, 2, 4, 8, 16, 32}, 21);
  PrimePair pp;
  pp.p_l = 7; pp.p_r = 7; pp.p_prime = 1;
  LevelTwoTables tables = make_level_two_tables(inst, IndexSet(0b000001), IndexSet(0b000010),
                                                IndexSet(0b000100), 1, 0, 1, 1, pp);
  REQUIRE(tables.part_l.count() == 2);
  // l1 weights: subsets of {8,16} plus mixer element 1: {1,9,17,25} = {1,2,3,4} mod 7
  LevelTwoLists lists = materialize_level_two_lists(tables, 0, 5, 0);
  REQUIRE(lists.l1.empty());
  LevelTwoLists lists2 = materialize_level_two_lists(tables, 0, 3, 0);
  REQUIRE_FALSE(lists2.l1.empty());
  REQUIRE_NOTHROW(verify_level_two_lists(lists2));

  REQUIRE_THROWS_AS(make_level_two_tables(inst, IndexSet(0b11), IndexSet(0b100), IndexSet(0b1000),
                                          1, 0, 1, 1, pp),
                    std::invalid_argument);  // unequal mixer sizes
  REQUIRE_THROWS_AS(make_level_two_tables(inst, IndexSet(0b1), IndexSet(0b1), IndexSet(0b100),
                                          1, 0, 1, 1, pp),
                    std::invalid_argument);  // overlapping mixers
  REQUIRE_THROWS_AS(make_level_two_tables(inst, IndexSet(0b1), IndexSet(0b10), IndexSet(0b100),
                                          1, 2, 1, 1, pp),
                    std::invalid_argument);  // s > lambda_count
}

TEST_CASE("admissible size band") {
  REQUIRE(admissible_sizes(0, 4, 16, 0.1) == std::vector<int>{0});
  REQUIRE(admissible_sizes(-1, 4, 16, 0.1) == std::vector<int>{0});

  auto band = admissible_sizes(6, 12, 24, 0.05);
  REQUIRE_FALSE(band.empty());
  REQUIRE(band.back() == 3);  // balanced size always present
  REQUIRE(std::is_sorted(band.begin(), band.end()));
  double thresh = 1.0 - 0.05 * 12 / 6.0 - std::log2(24.0) / 24.0;
  for (int s : band)
    if (s < 3) REQUIRE(entropy(s / 6.0) >= thresh);

  // larger eps_r widens the band
  auto tight = admissible_sizes(8, 8, 32, 0.0);
  auto loose = admissible_sizes(8, 8, 32, 0.5);
  REQUIRE(loose.size() >= tight.size());
}

TEST_CASE("weight-synchronized detection agrees with the quadruple scan") {
  // hand-built lists with partition discipline and trivial congruences
  Rng rng(43);
  IndexSet part_l(0b00000000011), part_ml(0b00000001100), part_m(0b00001110000),
      part_mr(0b00110000000), part_r(0b11000000000);

  int yes = 0, no = 0;
  for (int trial = 0; trial < 200; ++trial) {
    LevelTwoLists lists;
    lists.part_l = part_l; lists.part_ml = part_ml; lists.part_m = part_m;
    lists.part_mr = part_mr; lists.part_r = part_r;
    lists.p_l = 1; lists.p_r = 1; lists.p_prime = 1;
    lists.x = 0; lists.x_l = 0; lists.x_r = 0;
    lists.n = 11;
    lists.target = rng.below(40);

    auto fill = [&](std::vector<ListMember>& list, IndexSet allowed) {
      int len = 1 + (int)rng.below(5);
      for (int i = 0; i < len; ++i) {
        IndexSet w;
        for (int b : allowed.to_indices())
          if (rng.chance(0.5)) w.set(b);
        list.push_back(ListMember{w, rng.below(12)});
      }
    };
    fill(lists.l1, part_l | part_ml);
    fill(lists.l2, part_ml | part_m);
    fill(lists.r2, part_m | part_mr);
    fill(lists.r1, part_mr | part_r);

    bool ref = false;
    for (auto& a : lists.l1)
      for (auto& b : lists.l2)
        for (auto& c : lists.r2)
          for (auto& d : lists.r1) {
            if (a.weight + b.weight + c.weight + d.weight != lists.target) continue;
            if (!a.witness.disjoint(b.witness) || !c.witness.disjoint(d.witness)) continue;
            if (!b.witness.disjoint(c.witness)) continue;
            ref = true;
          }

    auto got = weighted_ov(rng, lists);
    REQUIRE(got.has_value() == ref);
    if (got) {
      u128 sum = lists.l1[got->l1].weight + lists.l2[got->l2].weight +
                 lists.r2[got->r2].weight + lists.r1[got->r1].weight;
      REQUIRE(sum == lists.target);
      ++yes;
    } else {
      ++no;
    }
  }
  REQUIRE(yes >= 15);
  REQUIRE(no >= 100);
}

TEST_CASE("detection over built lists: planted yes, parity no") {
  // fixed mixers, planted solution hitting each mixer exactly once; the full
  // residue grid makes recovery deterministic for powers weights
  SubsetSumInstance base = powers_instance(15, 0);
  IndexSet ml(0b000000000000111), mm(0b000000000111000), mr(0b000000111000000);
  IndexSet s_set(0b110010001001001);
  REQUIRE((s_set & ml).count() == 1);
  REQUIRE((s_set & mm).count() == 1);
  REQUIRE((s_set & mr).count() == 1);
  SubsetSumInstance inst(base.weights, (uint64_t)weight_of(base, s_set));

  for (int seed = 0; seed < 5; ++seed) {
    Rng rng(100 + seed);
    SolveDetail detail;
    auto sol = main_lemma_solve(rng, inst, ml, mm, mr, 1, 0.0, 0.0, SolverConfig::desk(),
                                Detector::weighted_ov, nullptr, &detail);
    REQUIRE(sol);
    REQUIRE(sol->subset == s_set);
    REQUIRE(detail.combos_tried >= 1);
  }

  // all weights even, target odd: no subset works, every seed must say none
  std::vector<uint64_t> even(15);
  for (int i = 0; i < 15; ++i) even[i] = 2ull << i;
  SubsetSumInstance no_inst(even, 135);
  for (int seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    REQUIRE_FALSE(main_lemma_solve(rng, no_inst, ml, mm, mr, 1, 0.0, 0.0).has_value());
  }
}

TEST_CASE("driver matches the exhaustive oracle") {
  Rng rng(71);
  int yes = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 10 + (int)rng.below(7);
    auto kind = trial % 4 == 0   ? InstanceKind::planted
                : trial % 4 == 1 ? InstanceKind::uniform
                : trial % 4 == 2 ? InstanceKind::low_mixing
                                 : InstanceKind::powers;
    SubsetSumInstance inst = generate_instance(rng, kind, n, 1 + (int)rng.below(14));
    Rng solver_rng(1000 + trial);
    SolveOutcome outcome;
    auto got = solve(solver_rng, inst, SolverConfig::desk(), Detector::weighted_ov, nullptr,
                     &outcome);
    auto ref = brute_force_solve(inst);
    if (ref) {
      REQUIRE(got.has_value());  // desk preset: recovery is near-certain at this size
      REQUIRE(weight_of(inst, got->subset) == u128(inst.target));
      ++yes;
    } else {
      REQUIRE_FALSE(got.has_value());  // one-sided: a witness would be verified
    }
    REQUIRE_FALSE(outcome.branch.empty());
  }
  REQUIRE(yes >= 25);
}

TEST_CASE("driver edge cases and outcome records") {
  Rng rng(5);
  SubsetSumInstance zero({3, 4}, 0);
  SolveOutcome out;
  auto sol = solve(rng, zero, SolverConfig::desk(), Detector::weighted_ov, nullptr, &out);
  REQUIRE(sol);
  REQUIRE(sol->subset.empty());
  REQUIRE(out.branch == "trivial");

  SubsetSumInstance over({3, 4}, 100);
  REQUIRE_FALSE(solve(rng, over, SolverConfig::desk(), Detector::weighted_ov, nullptr, &out)
                    .has_value());
  REQUIRE(out.branch == "none");

  // full-set solution reached through the complement variant
  std::vector<uint64_t> w{5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};
  u128 tot = 0;
  for (auto x : w) tot += x;
  SubsetSumInstance full_inst(w, (uint64_t)tot);
  auto full_sol = solve(rng, full_inst);
  REQUIRE(full_sol);
  REQUIRE(full_sol->subset == IndexSet::full(12));
}

TEST_CASE("space-budget ladder") {
  Rng rng(9);
  SolverConfig cfg = SolverConfig::desk();

  // b = 0: same stream, same answer as the plain driver
  SubsetSumInstance inst = generate_instance(rng, InstanceKind::planted, 14, 12);
  Rng r1(77), r2(77);
  auto direct = solve(r1, inst, cfg);
  auto budget0 = solve_with_space_budget(r2, inst, cfg.gamma * 14, cfg);
  REQUIRE(direct.has_value() == budget0.has_value());
  if (direct) REQUIRE(direct->subset == budget0->subset);

  // b = n: pure enumeration, exact on yes and no
  for (int trial = 0; trial < 20; ++trial) {
    int n = 8 + (int)rng.below(5);
    SubsetSumInstance small = generate_instance(
        rng, trial % 2 ? InstanceKind::uniform : InstanceKind::planted, n, 10);
    Rng rb(trial);
    auto got = solve_with_space_budget(rb, small, 0.0, cfg);
    auto ref = brute_force_solve(small);
    REQUIRE(got.has_value() == ref.has_value());
    if (got) REQUIRE(weight_of(small, got->subset) == u128(small.target));
  }

  // intermediate b: still agrees with the oracle on planted instances
  for (int trial = 0; trial < 10; ++trial) {
    SubsetSumInstance mid = generate_instance(rng, InstanceKind::planted, 16, 12);
    Rng rb(trial);
    double budget = cfg.gamma * 12;  // b = 4
    auto got = solve_with_space_budget(rb, mid, budget, cfg);
    REQUIRE(got);
    REQUIRE(weight_of(mid, got->subset) == u128(mid.target));
  }

  REQUIRE_THROWS_AS(solve_with_space_budget(rng, inst, -1.0, cfg), std::invalid_argument);
  REQUIRE_THROWS_AS(solve_with_space_budget(rng, inst, 100.0, cfg), std::invalid_argument);
}

TEST_CASE("four-quarter split outweighs the representation lists in memory") {
  // same planted instances, n = 24, mu * n = 5 mixers: the dedup quarter
  // lists hold ~2^6 entries while the congruence-pruned lists stay smaller
  int rep_wins = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng g(300 + seed);
    SubsetSumInstance inst = generate_instance(g, InstanceKind::planted, 24, 16);

    MemoryMeter ss_meter;
    auto ss = schroeppel_shamir_solve(inst, &ss_meter);
    REQUIRE(ss);

    MemoryMeter rep_meter;
    Rng r(400 + seed);
    auto rep = solve(r, inst, SolverConfig::desk(), Detector::weighted_ov, &rep_meter);
    REQUIRE(rep);
    REQUIRE(weight_of(inst, rep->subset) == u128(inst.target));
    if (rep_meter.peak <= ss_meter.peak) ++rep_wins;
  }
  REQUIRE(rep_wins >= 15);
}
