#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sss/sss.hpp"

using namespace sss;

TEST_CASE("dedup subset sums: sorted values, lowest witness masks") {
  SubsetSumInstance inst({5, 5, 3}, 0);
  std::vector<uint64_t> masks;
  auto vals = dedup_subset_sums(inst, IndexSet::full(3), &masks);
  REQUIRE(vals == std::vector<u128>{0, 3, 5, 8, 10, 13});
  REQUIRE(masks.size() == vals.size());
  for (size_t i = 0; i < vals.size(); ++i)
    REQUIRE(weight_of(inst, IndexSet(masks[i])) == vals[i]);
  REQUIRE(masks[2] == 0b001);  // value 5: mask {0} beats {1}

  std::vector<uint64_t> w(27, 1);
  SubsetSumInstance wide(w, 0);
  REQUIRE_THROWS_AS(dedup_subset_sums(wide, IndexSet::full(27)), std::invalid_argument);
}

TEST_CASE("compression rate of known mixer families") {
  // powers of two: all 2^m sums distinct, rate exactly zero
  std::vector<uint64_t> pw(16);
  for (int i = 0; i < 16; ++i) pw[i] = 1ull << i;
  SubsetSumInstance powers(pw, 0);
  for (uint64_t mask : {0xffull, 0xff00ull, 0xf0f0ull}) {
    MixerStats st = measure_mixer(powers, IndexSet(mask));
    REQUIRE(st.m == 8);
    REQUIRE(st.distinct == 256);
    REQUIRE(st.epsilon == 0.0);
  }

  // all-equal: m+1 distinct sums, maximal compression
  SubsetSumInstance flat(std::vector<uint64_t>(16, 7), 0);
  MixerStats st = measure_mixer(flat, IndexSet(0xff));
  REQUIRE(st.distinct == 9);
  REQUIRE(st.epsilon == Catch::Approx(1.0 - std::log2(9.0) / 8.0));

  // empty mixer measures zero by convention
  MixerStats empty = measure_mixer(flat, IndexSet());
  REQUIRE(empty.m == 0);
  REQUIRE(empty.distinct == 1);
  REQUIRE(empty.epsilon == 0.0);
}

TEST_CASE("two-valued weights compress every 8-mixer") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    SubsetSumInstance inst = generate_instance(rng, InstanceKind::low_mixing, 16, 20);
    IndexSet m_set = random_subset(rng, IndexSet::full(16), 8);
    int ca = 0, cb = 0;
    uint64_t a = inst.weights[m_set.to_indices().front()];
    for (int i : m_set.to_indices()) (inst.weights[i] == a ? ca : cb)++;
    MixerStats st = measure_mixer(inst, m_set);
    // i copies of one value, j of the other: at most (ca+1)(cb+1) sums
    REQUIRE(st.distinct <= int64_t(ca + 1) * (cb + 1));
    REQUIRE(st.epsilon >= 1.0 - std::log2(double((ca + 1) * (cb + 1))) / 8.0 - 1e-12);
    REQUIRE(st.epsilon >= 1.0 - std::log2(25.0) / 8.0 - 1e-12);  // worst split 4+4
  }
}

TEST_CASE("distinct-sum counts are submultiplicative across disjoint mixers") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    SubsetSumInstance inst = generate_instance(
        rng, trial % 2 ? InstanceKind::low_mixing : InstanceKind::uniform, 14, 6);
    IndexSet m1 = random_subset(rng, IndexSet::full(14), 5);
    IndexSet m2 = random_subset(rng, IndexSet::full(14) - m1, 5);
    int64_t d1 = measure_mixer(inst, m1).distinct;
    int64_t d2 = measure_mixer(inst, m2).distinct;
    int64_t d12 = measure_mixer(inst, m1 | m2).distinct;
    REQUIRE(d12 <= d1 * d2);
    REQUIRE(d12 >= std::max(d1, d2));
  }
}

TEST_CASE("win-win solve is exact in both directions") {
  Rng rng(21);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 150; ++trial) {
    int n = 8 + (int)rng.below(9);
    int bw = 3 + (int)rng.below(10);
    auto kind = trial % 3 == 0 ? InstanceKind::low_mixing
              : trial % 3 == 1 ? InstanceKind::planted
                               : InstanceKind::uniform;
    SubsetSumInstance inst = generate_instance(rng, kind, n, bw);
    IndexSet m_set = random_subset(rng, IndexSet::full(n), 1 + (int)rng.below(n / 4 + 1));

    auto got = win_win_solve(inst, m_set, 0.15, 0.2);
    auto ref = brute_force_solve(inst);
    REQUIRE(got.has_value() == ref.has_value());
    if (got) {
      REQUIRE(weight_of(inst, got->subset) == u128(inst.target));
      ++yes;
    } else {
      ++no;
    }
  }
  REQUIRE(yes >= 40);  // the mix of kinds must exercise both outcomes
  REQUIRE(no >= 20);
}

TEST_CASE("win-win banks the mixer compression in its peak payload") {
  // all-equal weights, half the instance in the mixer: the glued list
  // collapses to counts, so the peak footprint stays far below 2^{n/2}
  SubsetSumInstance flat(std::vector<uint64_t>(16, 3), 18);
  MemoryMeter meter;
  auto got = win_win_solve(flat, IndexSet(0xff), 0.15, 0.25, &meter);
  REQUIRE(got);
  REQUIRE(weight_of(flat, got->subset) == 18);
  REQUIRE(meter.current == 0);
  REQUIRE(meter.peak <= 64);  // mitm on the same instance would hold 256 entries
}

TEST_CASE("exact-cardinality search finds planted solutions") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 8 + (int)rng.below(7);
    int ell = 1 + (int)rng.below(4);
    std::vector<uint64_t> w(n);
    for (auto& x : w) x = 1 + rng.below(1ull << 20);
    IndexSet planted = random_subset(rng, IndexSet::full(n), ell);
    SubsetSumInstance inst(w, (uint64_t)weight_of(SubsetSumInstance(w, 0), planted));

    auto got = small_lambda_solve(inst, ell, default_small_lambda_trials(n), rng);
    REQUIRE(got);
    REQUIRE(got->subset.count() == ell);  // exact cardinality, not just exact sum
    REQUIRE(weight_of(inst, got->subset) == u128(inst.target));
  }
}

TEST_CASE("exact-cardinality search edge cases") {
  SubsetSumInstance inst({4, 9, 2, 7}, 0);
  Rng rng(1);
  auto zero = small_lambda_solve(inst, 0, 10, rng);
  REQUIRE(zero);
  REQUIRE(zero->subset.empty());

  SubsetSumInstance inst2({4, 9, 2, 7}, 5);
  REQUIRE_FALSE(small_lambda_solve(inst2, 0, 10, rng).has_value());
  REQUIRE_THROWS_AS(small_lambda_solve(inst2, -1, 10, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(small_lambda_solve(inst2, 5, 10, rng), std::invalid_argument);

  // full-cardinality solution: only the whole set works
  SubsetSumInstance all({1, 2, 3}, 6);
  auto whole = small_lambda_solve(all, 3, 10, rng);
  REQUIRE(whole);
  REQUIRE(whole->subset == IndexSet::full(3));

  REQUIRE(default_small_lambda_trials(20) == 4000);
}

TEST_CASE("exact-cardinality search never fabricates a hit") {
  // weights all even, target odd: every trial must come up empty
  Rng rng(55);
  std::vector<uint64_t> w(12);
  for (auto& x : w) x = 2 * (1 + rng.below(1000));
  SubsetSumInstance inst(w, 135);
  for (int ell = 1; ell <= 6; ++ell)
    REQUIRE_FALSE(small_lambda_solve(inst, ell, 50, rng).has_value());
}
