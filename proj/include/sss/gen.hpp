#pragma once

// Instance generators. Four families, each exercising a different solver
// branch: iid weights, planted half-size solutions, two-valued weights with
// heavy sum collisions, and powers of two where every mixer is perfect.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sss/index_set.hpp"
#include "sss/instance.hpp"
#include "sss/rng.hpp"

namespace sss {

enum class InstanceKind { uniform, planted, low_mixing, powers };

inline const char* instance_kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::uniform: return "uniform";
    case InstanceKind::planted: return "planted";
    case InstanceKind::low_mixing: return "low-mixing";
    case InstanceKind::powers: return "powers";
  }
  return "?";
}

inline std::optional<InstanceKind> instance_kind_from(const std::string& s) {
  if (s == "uniform") return InstanceKind::uniform;
  if (s == "planted") return InstanceKind::planted;
  if (s == "low-mixing") return InstanceKind::low_mixing;
  if (s == "powers") return InstanceKind::powers;
  return std::nullopt;
}

// planted_out, when given, receives the subset whose weight became the target
// (planted and low-mixing kinds only).
inline SubsetSumInstance generate_instance(Rng& rng, InstanceKind kind, int n, int bit_width,
                                           IndexSet* planted_out = nullptr) {
  if (n < 1 || n > 60) throw std::invalid_argument("generate_instance: n out of [1,60]");
  if (bit_width < 1 || bit_width > 62)
    throw std::invalid_argument("generate_instance: bit_width out of [1,62]");
  if (planted_out) *planted_out = IndexSet(0);

  uint64_t wmax = (1ull << bit_width) - 1;  // weights land in [1, 2^bit_width)
  std::vector<uint64_t> w(n);
  auto uniform_target = [&](u128 total) {
    uint64_t hi = total < (u128)kWeightLimit ? (uint64_t)total : kWeightLimit - 1;
    return 1 + rng.below(hi);
  };

  switch (kind) {
    case InstanceKind::uniform: {
      for (auto& x : w) x = 1 + rng.below(wmax);
      SubsetSumInstance inst(w, 1);
      inst.target = uniform_target(inst.total());
      return inst;
    }
    case InstanceKind::planted: {
      for (auto& x : w) x = 1 + rng.below(wmax);
      SubsetSumInstance inst(w, 1);
      IndexSet s = random_subset(rng, IndexSet::full(n), n / 2);
      u128 t = weight_of(inst, s);
      if (t >= (u128)kWeightLimit)
        throw std::invalid_argument("generate_instance: planted target overflows; lower bit_width");
      if (t == 0) t = inst.weights[0], s = IndexSet::single(0);  // n = 1 corner
      inst.target = (uint64_t)t;
      if (planted_out) *planted_out = s;
      return inst;
    }
    case InstanceKind::low_mixing: {
      uint64_t a = 1 + rng.below(wmax), b = 1 + rng.below(wmax);
      for (auto& x : w) x = rng.below(2) ? b : a;
      SubsetSumInstance inst(w, 1);
      IndexSet s = random_subset(rng, IndexSet::full(n), n / 2);
      u128 t = weight_of(inst, s);
      if (t == 0) t = inst.weights[0], s = IndexSet::single(0);
      inst.target = (uint64_t)t;
      if (planted_out) *planted_out = s;
      return inst;
    }
    case InstanceKind::powers: {
      if (n > 60) throw std::invalid_argument("generate_instance: powers needs n <= 60");
      for (int i = 0; i < n; ++i) w[i] = 1ull << i;
      SubsetSumInstance inst(w, 1);
      inst.target = uniform_target(inst.total());
      return inst;
    }
  }
  throw std::invalid_argument("generate_instance: unknown kind");
}

}  // namespace sss
