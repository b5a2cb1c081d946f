#pragma once

// Shared numerics: binary entropy and its inverse, exact binomials, random
// primes from [r, 2r] with deterministic Miller-Rabin, residue coverage and
// intersection-concentration measurements, and the exponent-space inequality
// checks used by the solver analysis.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sss/index_set.hpp"
#include "sss/instance.hpp"
#include "sss/int128.hpp"
#include "sss/rng.hpp"

namespace sss {

// h(x) = -x log2 x - (1-x) log2 (1-x); exact 0 at the endpoints.
inline double entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Inverse of h on [0, 1/2] by bisection; |h(result) - y| <= 1e-10.
inline double entropy_inverse(double y) {
  if (y < 0.0 || y > 1.0) throw std::domain_error("entropy_inverse: argument outside [0,1]");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (entropy(mid) < y) lo = mid; else hi = mid;
    if (hi - lo < 1e-16) break;
  }
  return 0.5 * (lo + hi);
}

// Exact C(n, k); n <= 64 keeps every intermediate inside u128.
inline u128 binomial_u128(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > 64) throw std::invalid_argument("binomial_u128: n too large");
  if (k > n - k) k = n - k;
  u128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * u128(n - k + i) / u128(i);
  }
  return r;
}

inline double binomial(int n, int k) { return double(binomial_u128(n, k)); }

inline double log2_binomial(int n, int k) {
  u128 b = binomial_u128(n, k);
  if (b == 0) throw std::invalid_argument("log2_binomial: zero binomial");
  return std::log2(double(b));
}

// ---------------------------------------------------------------------------
// Primality / random primes

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return (uint64_t)((u128)a * b % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin; the fixed witness set decides all n < 2^64.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimeSample {
  uint64_t p = 0;
  uint64_t lo = 0, hi = 0;  // the sampled interval [lo, hi]
};

// Uniform prime from [r, 2r] by rejection sampling.
inline PrimeSample random_prime(Rng& rng, uint64_t r) {
  if (r < 2) throw std::invalid_argument("random_prime: r < 2");
  if (r >= (1ull << 62)) throw std::invalid_argument("random_prime: 2r overflows the weight domain");
  uint64_t lo = r, hi = 2 * r;
  for (;;) {
    uint64_t cand = lo + rng.below(hi - lo + 1);
    if (is_prime_u64(cand)) return PrimeSample{cand, lo, hi};
  }
}

// ---------------------------------------------------------------------------
// Empirical lemma harnesses

// Number of distinct residues w(X) mod p over X subseteq Q with |X| in
// [size_lo, size_hi].
inline uint64_t residue_coverage(const SubsetSumInstance& inst, IndexSet q,
                                 uint64_t p, int size_lo, int size_hi) {
  if (q.count() > 24) throw std::invalid_argument("residue_coverage: |Q| > 24");
  if (p == 0) throw std::invalid_argument("residue_coverage: p = 0");
  std::vector<uint64_t> residues;
  uint64_t qb = q.bits;
  uint64_t sub = 0;
  // enumerate all submasks of qb, including 0
  for (;;) {
    IndexSet x(sub);
    int c = x.count();
    if (c >= size_lo && c <= size_hi) residues.push_back((uint64_t)(weight_of(inst, x) % p));
    if (sub == qb) break;
    sub = (sub - qb) & qb;
  }
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  return residues.size();
}

// Empirical Pr[|A cap B| = a*b/d] with A fixed to the first a elements of [d]
// and B a uniform b-subset.
inline double concentration_estimate(Rng& rng, int d, int a, int b, int trials) {
  if (d < 1 || d > 40) throw std::invalid_argument("concentration_estimate: d out of [1,40]");
  if (a < 0 || a > d || b < 0 || b > d) throw std::invalid_argument("concentration_estimate: sizes out of range");
  if ((int64_t)a * b % d != 0) throw std::invalid_argument("concentration_estimate: a*b/d not integral");
  int want = (int)((int64_t)a * b / d);
  IndexSet universe = IndexSet::full(d);
  IndexSet a_set = IndexSet::full(a);
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    IndexSet b_set = random_subset(rng, universe, b);
    if ((a_set & b_set).count() == want) ++hits;
  }
  return double(hits) / double(trials);
}

// Exact hypergeometric Pr[|A cap B| = k].
inline double concentration_exact(int d, int a, int b) {
  int k = (int)((int64_t)a * b / d);
  return binomial(a, k) * binomial(d - a, b - k) / binomial(d, b);
}

// ---------------------------------------------------------------------------
// Exponent-space inequality checks

struct OvInequalityRow {
  double lambda, sigma;
  double x_star;          // grid argmin
  double lhs_exponent;    // min over x of E(x)
  double rhs_exponent;    // 1/2 + lambda - h(lambda/2)
  double margin;          // rhs - lhs; violation iff margin < -1e-9
};

struct OvInequalityReport {
  std::vector<OvInequalityRow> rows;
  int violations = 0;
  static std::string csv_header() {
    return "lambda,sigma,x_star,lhs_exponent,rhs_exponent,margin";
  }
};

// Per-n exponent of C(a*n, b*n) is a*h(b/a).
inline double scaled_entropy(double a, double b) {
  if (a <= 0) return 0.0;
  double ratio = b / a;
  if (ratio < 0 && ratio > -1e-12) ratio = 0;
  if (ratio > 1 && ratio < 1 + 1e-12) ratio = 1;
  return a * entropy(ratio);
}

// E(x) = max(expC(1-lambda*sigma, x-lambda*sigma), expC(1-(1-sigma)*lambda, x))
//        - expC(1-lambda, x-lambda*sigma), minimized over x in the feasible
//        interval. A coarse x_step scan locates the basin; nested refinement
//        passes then sharpen the argmin, because E has a kink where the two
//        max branches cross and the coarse grid can overshoot the true
//        minimum by O(x_step), which dwarfs the tolerances involved.
inline OvInequalityReport verify_ov_inequality(const std::vector<double>& lambda_grid,
                                               const std::vector<double>& sigma_grid,
                                               double x_step) {
  OvInequalityReport rep;
  for (double lam : lambda_grid) {
    for (double sig : sigma_grid) {
      double x_lo = lam * sig;
      double x_hi = 1.0 - (1.0 - sig) * lam;
      auto eval = [&](double x) {
        double e1 = scaled_entropy(1.0 - lam * sig, x - lam * sig);
        double e2 = scaled_entropy(1.0 - (1.0 - sig) * lam, x);
        double e3 = scaled_entropy(1.0 - lam, x - lam * sig);
        return std::max(e1, e2) - e3;
      };
      double best = 1e18, best_x = x_lo;
      long steps = lround((x_hi - x_lo) / x_step);
      for (long i = 0; i <= steps; ++i) {
        double x = x_lo + double(i) * x_step;
        if (x > x_hi) x = x_hi;
        double e = eval(x);
        if (e < best) { best = e; best_x = x; }
      }
      // refine around the coarse argmin down to ~1e-9 resolution in x
      double span = x_step;
      for (int level = 0; level < 7; ++level) {
        double lo = std::max(x_lo, best_x - span);
        double hi = std::min(x_hi, best_x + span);
        for (int i = 0; i <= 40; ++i) {
          double x = lo + (hi - lo) * double(i) / 40.0;
          double e = eval(x);
          if (e < best) { best = e; best_x = x; }
        }
        span /= 10.0;
      }
      double rhs = 0.5 + lam - entropy(lam / 2.0);
      OvInequalityRow row{lam, sig, best_x, best, rhs, rhs - best};
      if (row.margin < -1e-9) ++rep.violations;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

struct EntropyInequalityReport {
  int checked = 0;
  int violations = 0;
  double worst_slack = 1e18;  // min over all checks of (rhs - lhs)
};

// Sweeps three closed-form entropy inequalities; slack >= -1e-12 required:
//   1 - 4a^2          <= h(1/2 - a)
//   h(1/4 + a)        <= h(1/4) + a*log2(3)
//   h(s*l) + h((1-s)l) <= 2h(l/2)
inline EntropyInequalityReport entropy_inequality_suite(double step = 1e-3) {
  EntropyInequalityReport rep;
  auto check = [&rep](double lhs, double rhs) {
    ++rep.checked;
    double slack = rhs - lhs;
    if (slack < rep.worst_slack) rep.worst_slack = slack;
    if (slack < -1e-12) ++rep.violations;
  };
  const double log2_3 = std::log2(3.0);
  long n = lround(0.5 / step);
  for (long i = 0; i <= n; ++i) {
    double a = std::min(0.5, double(i) * step);
    check(1.0 - 4.0 * a * a, entropy(0.5 - a));
    check(entropy(0.25 + a), entropy(0.25) + a * log2_3);
  }
  long m = lround(1.0 / step);
  for (long i = 0; i <= m; ++i) {
    double sig = std::min(1.0, double(i) * step);
    for (long j = 0; j <= m; ++j) {
      double lam = std::min(1.0, double(j) * step);
      check(entropy(sig * lam) + entropy((1.0 - sig) * lam), 2.0 * entropy(lam / 2.0));
    }
  }
  return rep;
}

}  // namespace sss
