#pragma once

// Subset Sum instances and their text format:
//   line 1: "n t"
//   line 2: n space-separated weights, optional trailing newline.
// Weights and target are nonnegative and below 2^63; 1 <= n <= 60.

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sss/index_set.hpp"
#include "sss/int128.hpp"

namespace sss {

struct parse_error : std::runtime_error {
  int line, col;
  parse_error(int line_, int col_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ": " + what_),
        line(line_),
        col(col_) {}
};

constexpr uint64_t kWeightLimit = 1ull << 63;  // exclusive

struct SubsetSumInstance {
  int n = 0;
  std::vector<uint64_t> weights;
  uint64_t target = 0;

  SubsetSumInstance() = default;
  SubsetSumInstance(std::vector<uint64_t> w, uint64_t t)
      : n((int)w.size()), weights(std::move(w)), target(t) {
    if (n < 1 || n > 60) throw std::invalid_argument("instance: n out of [1,60]");
    if (target >= kWeightLimit) throw std::invalid_argument("instance: target overflow");
    for (uint64_t x : weights)
      if (x >= kWeightLimit) throw std::invalid_argument("instance: weight overflow");
  }

  u128 total() const {
    u128 s = 0;
    for (uint64_t x : weights) s += x;
    return s;
  }
};

inline u128 weight_of(const SubsetSumInstance& inst, IndexSet s) {
  u128 sum = 0;
  uint64_t m = s.bits;
  while (m) {
    sum += inst.weights[std::countr_zero(m)];
    m &= m - 1;
  }
  return sum;
}

struct Solution {
  IndexSet subset;
  u128 achieved_sum = 0;

  // line-oriented key:value, indices ascending
  std::string serialize() const {
    return "indices: " + subset.to_index_string() + "\nsum: " + to_string(achieved_sum) + "\n";
  }
};

namespace detail {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') { ++line; col = 1; } else { ++col; }
    ++pos;
  }
  void skip_spaces() {
    while (!done() && (peek() == ' ' || peek() == '\t')) advance();
  }
  uint64_t read_u64(const char* what) {
    skip_spaces();
    if (done() || !std::isdigit((unsigned char)peek()))
      throw parse_error(line, col, std::string("expected ") + what);
    int start_col = col;
    u128 v = 0;
    while (!done() && std::isdigit((unsigned char)peek())) {
      v = v * 10 + (peek() - '0');
      if (v >= (u128(1) << 64)) throw parse_error(line, start_col, "number overflow");
      advance();
    }
    return (uint64_t)v;
  }
  void expect_newline() {
    skip_spaces();
    if (done()) return;
    if (peek() != '\n') throw parse_error(line, col, "trailing characters");
    advance();
  }
};

}  // namespace detail

inline SubsetSumInstance parse_instance(const std::string& text) {
  detail::Cursor c{text};
  uint64_t n = c.read_u64("element count");
  if (n < 1 || n > 60) throw parse_error(1, 1, "element count out of [1,60]");
  c.skip_spaces();
  int target_col = c.col;
  uint64_t t = c.read_u64("target");
  if (t >= kWeightLimit) throw parse_error(1, target_col, "target overflow (>= 2^63)");
  c.expect_newline();
  std::vector<uint64_t> w;
  w.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    c.skip_spaces();
    if (c.done() || c.peek() == '\n')
      throw parse_error(c.line, c.col, "weight count mismatch: expected " +
                                           std::to_string(n) + ", got " + std::to_string(i));
    int col0 = c.col;
    uint64_t x = c.read_u64("weight");
    if (x >= kWeightLimit) throw parse_error(c.line, col0, "weight overflow (>= 2^63)");
    w.push_back(x);
  }
  c.skip_spaces();
  if (!c.done() && c.peek() == '\n') c.advance();
  c.skip_spaces();
  if (!c.done())
    throw parse_error(c.line, c.col, "weight count mismatch: extra content after " +
                                         std::to_string(n) + " weights");
  return SubsetSumInstance(std::move(w), t);
}

inline std::string serialize_instance(const SubsetSumInstance& inst) {
  std::string out = std::to_string(inst.n) + " " + std::to_string(inst.target) + "\n";
  for (int i = 0; i < inst.n; ++i) {
    if (i) out += ' ';
    out += std::to_string(inst.weights[i]);
  }
  out += '\n';
  return out;
}

}  // namespace sss
