#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "sss/sss.hpp"

using namespace sss;

TEST_CASE("index set operations") {
  IndexSet a;
  a.set(0);
  a.set(3);
  a.set(17);
  REQUIRE(a.count() == 3);
  REQUIRE(a.test(3));
  REQUIRE_FALSE(a.test(2));
  a.clear(3);
  REQUIRE(a.count() == 2);
  REQUIRE_FALSE(a.contains(3));

  IndexSet b(0b1011);
  IndexSet c(0b0010);
  REQUIRE(c.subset_of(b));
  REQUIRE_FALSE(b.subset_of(c));
  REQUIRE(IndexSet(0b100).disjoint(b));
  REQUIRE_FALSE(c.disjoint(b));

  REQUIRE((b & c) == c);
  REQUIRE((b | IndexSet(0b100)).bits == 0b1111);
  REQUIRE((b - c).bits == 0b1001);
  REQUIRE((b ^ b).empty());

  REQUIRE(IndexSet::full(5).bits == 0b11111);
  REQUIRE(IndexSet::full(0).empty());
  REQUIRE(IndexSet::single(7).bits == 128);

  REQUIRE(b.to_indices() == std::vector<int>{0, 1, 3});
  REQUIRE(b.to_index_string() == "0 1 3");
  REQUIRE(IndexSet().to_index_string() == "");
  REQUIRE(IndexSet(0x1f).to_hex() == "0x1f");
}

TEST_CASE("random subsets are uniform in size and membership") {
  Rng rng(11);
  IndexSet universe(0b1111011101);  // 8 elements, gaps at 1 and 5
  for (int k = 0; k <= 8; ++k) {
    IndexSet s = random_subset(rng, universe, k);
    REQUIRE(s.count() == k);
    REQUIRE(s.subset_of(universe));
  }
  REQUIRE_THROWS_AS(random_subset(rng, universe, 9), std::invalid_argument);

  // every element appears with roughly its marginal k/m
  int hits[10] = {0};
  for (int t = 0; t < 2000; ++t) {
    IndexSet s = random_subset(rng, universe, 4);
    for (int i : s.to_indices()) ++hits[i];
  }
  for (int i : universe.to_indices()) {
    REQUIRE(hits[i] > 700);  // expected 1000
    REQUIRE(hits[i] < 1300);
  }
  REQUIRE(hits[1] == 0);
  REQUIRE(hits[5] == 0);
}

TEST_CASE("rng streams are deterministic and split is independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());

  Rng parent(7);
  Rng child = parent.split();
  Rng parent2(7);
  parent2.next();  // split advances the parent by exactly one step
  REQUIRE(parent.next() == parent2.next());

  uint64_t c0 = child.next();
  Rng parent3(7);
  REQUIRE(c0 != parent3.next());

  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    uint64_t v = r.below(17);
    REQUIRE(v < 17);
  }
  for (int i = 0; i < 1000; ++i) {
    double u = r.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("u128 decimal rendering") {
  REQUIRE(to_string(u128(0)) == "0");
  REQUIRE(to_string(u128(1234567890123456789ull)) == "1234567890123456789");
  u128 big = u128(1) << 100;
  REQUIRE(to_string(big) == "1267650600228229401496703205376");
  REQUIRE(to_string(i128(-42)) == "-42");
  REQUIRE(to_string(i128(0)) == "0");
}

TEST_CASE("instance construction validates bounds") {
  REQUIRE_NOTHROW(SubsetSumInstance({1, 2, 3}, 4));
  REQUIRE_THROWS_AS(SubsetSumInstance({}, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(SubsetSumInstance({1}, kWeightLimit), std::invalid_argument);
  REQUIRE_THROWS_AS(SubsetSumInstance({kWeightLimit}, 1), std::invalid_argument);
  REQUIRE_NOTHROW(SubsetSumInstance({kWeightLimit - 1}, kWeightLimit - 1));
  REQUIRE_NOTHROW(SubsetSumInstance({0, 0}, 0));  // zero weights are legal

  std::vector<uint64_t> sixtyone(61, 1);
  REQUIRE_THROWS_AS(SubsetSumInstance(sixtyone, 1), std::invalid_argument);
}

TEST_CASE("weight_of sums exactly in 128 bits") {
  SubsetSumInstance inst({5, 7, 11, 13}, 20);
  REQUIRE(weight_of(inst, IndexSet(0b0000)) == 0);
  REQUIRE(weight_of(inst, IndexSet(0b1010)) == 20);
  REQUIRE(weight_of(inst, IndexSet(0b1111)) == 36);

  // 60 maximal weights overflow u64 but not u128
  std::vector<uint64_t> w(60, kWeightLimit - 1);
  SubsetSumInstance big(w, 0);
  u128 expect = u128(kWeightLimit - 1) * 60;
  REQUIRE(big.total() == expect);
  REQUIRE(weight_of(big, IndexSet::full(60)) == expect);
}

TEST_CASE("instance text round-trips") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + (int)rng.below(20);
    std::vector<uint64_t> w(n);
    for (auto& x : w) x = rng.below(kWeightLimit);
    SubsetSumInstance inst(w, rng.below(kWeightLimit));
    SubsetSumInstance back = parse_instance(serialize_instance(inst));
    REQUIRE(back.n == inst.n);
    REQUIRE(back.target == inst.target);
    REQUIRE(back.weights == inst.weights);
  }

  SubsetSumInstance one = parse_instance("1 0\n0");  // no trailing newline
  REQUIRE(one.n == 1);
  REQUIRE(one.weights[0] == 0);

  SubsetSumInstance padded = parse_instance("  2   7 \n 3\t4 \n");
  REQUIRE(padded.n == 2);
  REQUIRE(padded.target == 7);
  REQUIRE(padded.weights == std::vector<uint64_t>{3, 4});
}

TEST_CASE("parse errors carry line and column") {
  auto expect_err = [](const std::string& text, int line, int col) {
    try {
      parse_instance(text);
      FAIL("expected parse_error for: " << text);
    } catch (const parse_error& e) {
      CHECK(e.line == line);
      CHECK(e.col == col);
    }
  };

  expect_err("", 1, 1);                         // missing count
  expect_err("2", 1, 2);                        // missing target
  expect_err("0 5\n", 1, 1);                    // n out of range
  expect_err("61 5\n1", 1, 1);                  // n out of range
  expect_err("2 5 x\n1 2\n", 1, 5);             // trailing characters on header
  expect_err("2 5\n1\n", 2, 2);                 // too few weights
  expect_err("2 5\n1 2 3\n", 2, 5);             // too many weights
  expect_err("2 5\n1 a\n", 2, 3);               // non-digit weight
  expect_err("1 9223372036854775808\n1\n", 1, 3);   // target >= 2^63
  expect_err("1 5\n9223372036854775808\n", 2, 1);   // weight >= 2^63
  expect_err("1 99999999999999999999\n1\n", 1, 3);  // u64 overflow mid-number

  try {
    parse_instance("2 5\n1 a\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
    REQUIRE(std::string(e.what()).find("col 3") != std::string::npos);
  }
}

TEST_CASE("solution serialization is line oriented") {
  Solution s;
  s.subset = IndexSet(0b1011);
  s.achieved_sum = 99;
  REQUIRE(s.serialize() == "indices: 0 1 3\nsum: 99\n");

  Solution empty;
  REQUIRE(empty.serialize() == "indices: \nsum: 0\n");
}

TEST_CASE("memory meter tracks a high-water mark") {
  MemoryMeter m;
  m.add(10);
  m.add(5);
  REQUIRE(m.current == 15);
  REQUIRE(m.peak == 15);
  m.release(12);
  REQUIRE(m.current == 3);
  REQUIRE(m.peak == 15);
  m.add(4);
  REQUIRE(m.peak == 15);

  MemoryMeter inner;
  inner.add(40);
  inner.release(40);
  m.absorb_peak(inner);  // inner peak rides on top of current
  REQUIRE(m.peak == 47);
}
