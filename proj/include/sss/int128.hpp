#pragma once

// 128-bit helpers. Sums of up to 60 weights below 2^63 need ~69 bits, so all
// subset-sum arithmetic runs in __int128.

#include <cstdint>
#include <string>

namespace sss {

using u128 = unsigned __int128;
using i128 = __int128;

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  char buf[40];
  int pos = 40;
  while (v > 0) {
    buf[--pos] = char('0' + int(v % 10));
    v /= 10;
  }
  return std::string(buf + pos, buf + 40);
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(u128(-v));
  return to_string(u128(v));
}

}  // namespace sss
