#pragma once

// Peak-payload instrumentation: counts simultaneously live list/heap entries
// (not bytes, not RSS). Solvers report the high-water mark.

#include <algorithm>
#include <cstdint>

namespace sss {

struct MemoryMeter {
  int64_t current = 0;
  int64_t peak = 0;

  void add(int64_t k) {
    current += k;
    peak = std::max(peak, current);
  }
  void release(int64_t k) { current -= k; }
  void absorb_peak(const MemoryMeter& inner) { peak = std::max(peak, current + inner.peak); }
};

}  // namespace sss
