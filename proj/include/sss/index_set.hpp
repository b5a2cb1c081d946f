#pragma once

// Index sets over [n], n <= 60, as 64-bit masks.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sss/rng.hpp"

namespace sss {

struct IndexSet {
  uint64_t bits = 0;

  IndexSet() = default;
  explicit IndexSet(uint64_t mask) : bits(mask) {}

  static IndexSet full(int n) {
    return IndexSet(n >= 64 ? ~0ull : (1ull << n) - 1);
  }
  static IndexSet single(int i) { return IndexSet(1ull << i); }

  bool test(int i) const { return (bits >> i) & 1; }
  void set(int i) { bits |= 1ull << i; }
  void clear(int i) { bits &= ~(1ull << i); }
  int count() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }

  bool subset_of(IndexSet o) const { return (bits & ~o.bits) == 0; }
  bool disjoint(IndexSet o) const { return (bits & o.bits) == 0; }
  bool contains(int i) const { return test(i); }

  friend IndexSet operator&(IndexSet a, IndexSet b) { return IndexSet(a.bits & b.bits); }
  friend IndexSet operator|(IndexSet a, IndexSet b) { return IndexSet(a.bits | b.bits); }
  friend IndexSet operator^(IndexSet a, IndexSet b) { return IndexSet(a.bits ^ b.bits); }
  friend IndexSet operator-(IndexSet a, IndexSet b) { return IndexSet(a.bits & ~b.bits); }
  friend bool operator==(IndexSet a, IndexSet b) { return a.bits == b.bits; }
  friend bool operator!=(IndexSet a, IndexSet b) { return a.bits != b.bits; }

  std::vector<int> to_indices() const {
    std::vector<int> out;
    uint64_t m = bits;
    while (m) {
      out.push_back(std::countr_zero(m));
      m &= m - 1;
    }
    return out;
  }

  // "0 2 5" (ascending); empty set -> "".
  std::string to_index_string() const {
    std::string out;
    for (int i : to_indices()) {
      if (!out.empty()) out += ' ';
      out += std::to_string(i);
    }
    return out;
  }

  std::string to_hex() const {
    char buf[19];
    snprintf(buf, sizeof buf, "0x%llx", (unsigned long long)bits);
    return std::string(buf);
  }
};

// Uniform k-subset of `universe` (partial Fisher-Yates over its elements).
inline IndexSet random_subset(Rng& rng, IndexSet universe, int k) {
  std::vector<int> elems = universe.to_indices();
  if (k < 0 || k > (int)elems.size())
    throw std::invalid_argument("random_subset: k exceeds universe size");
  IndexSet out;
  int m = (int)elems.size();
  for (int i = 0; i < k; ++i) {
    int j = i + (int)rng.below(uint64_t(m - i));
    std::swap(elems[i], elems[j]);
    out.set(elems[i]);
  }
  return out;
}

}  // namespace sss
