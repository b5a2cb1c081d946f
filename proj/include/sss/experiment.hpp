#pragma once

// Measurement suites. Each anchors one analytic claim with desk-scale
// statistics and emits a CSV block: one row per trial or grid point, then a
// summary row with the pass verdict. Rows carry enough (seed, preset) to be
// re-run in isolation.

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "sss/gen.hpp"
#include "sss/index_set.hpp"
#include "sss/instance.hpp"
#include "sss/mixer.hpp"
#include "sss/numerics.hpp"
#include "sss/ov.hpp"
#include "sss/rng.hpp"
#include "sss/solver.hpp"

namespace sss {

struct ExperimentReport {
  std::string suite;
  std::string csv;
  bool pass = false;
  std::string summary;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.6g", v);
  return std::string(buf);
}

inline uint64_t row_seed(uint64_t seed, int trial) { return seed + 1000003ull * (uint64_t)trial; }

}  // namespace detail

// Residue coverage on a perfect mixer: random primes of order 2^{|Q|/2},
// counting residues hit by subsets of size s0..|Q|/2.
inline ExperimentReport mixer_coverage_suite(uint64_t seed, int trials,
                                             const std::string& preset) {
  if (trials <= 0) trials = 100;
  const int q_size = 12;
  Rng gen(seed);
  SubsetSumInstance inst = generate_instance(gen, InstanceKind::powers, q_size, 16);
  IndexSet q = IndexSet::full(q_size);
  MixerStats stats = measure_mixer(inst, q);
  int s0 = 0;
  while (binomial_u128(q_size, s0) * (u128)q_size < (u128)stats.distinct) ++s0;

  ExperimentReport rep;
  rep.suite = "mixer-coverage";
  rep.csv = "suite,seed,preset,trial,prime,s0,coverage,threshold,pass\n";
  int ok = 0;
  for (int i = 0; i < trials; ++i) {
    Rng r(detail::row_seed(seed, i));
    uint64_t p = random_prime(r, 1ull << (q_size / 2)).p;
    uint64_t cov = residue_coverage(inst, q, p, s0, q_size / 2);
    double threshold = (double)p / (100.0 * q_size);
    bool pass = (double)cov >= threshold;
    ok += pass;
    rep.csv += rep.suite + "," + std::to_string(detail::row_seed(seed, i)) + "," + preset + "," +
               std::to_string(i) + "," + std::to_string(p) + "," + std::to_string(s0) + "," +
               std::to_string(cov) + "," + detail::fmt(threshold) + "," + (pass ? "1" : "0") +
               "\n";
  }
  double frac = (double)ok / trials;
  rep.pass = frac >= 0.80;
  rep.summary = "coverage pass fraction " + detail::fmt(frac) + " (need >= 0.8)";
  rep.csv += "summary," + std::to_string(seed) + "," + preset + ",," + std::to_string(trials) +
             ",," + detail::fmt(frac) + ",0.8," + (rep.pass ? "1" : "0") + "\n";
  return rep;
}

// Frequency of |S ∩ mixer| hitting its expectation for all three mixers at
// once on a planted half-density solution.
inline ExperimentReport split_balance_suite(uint64_t seed, int trials, const SolverConfig& cfg,
                                            const std::string& preset) {
  if (trials <= 0) trials = 1000;
  const int n = 20;
  Rng gen(seed);
  IndexSet planted;
  SubsetSumInstance inst = generate_instance(gen, InstanceKind::planted, n, 16, &planted);
  int m = (int)std::lround(cfg.mu * n);
  int want = (int)std::lround((double)planted.count() * m / n);

  ExperimentReport rep;
  rep.suite = "split-balance";
  rep.csv = "suite,seed,preset,trial,im,iml,imr,hit\n";
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    Rng r(detail::row_seed(seed, i));
    IndexSet univ = IndexSet::full(n);
    IndexSet m1 = random_subset(r, univ, m);
    IndexSet m2 = random_subset(r, univ - m1, m);
    IndexSet m3 = random_subset(r, univ - m1 - m2, m);
    int i1 = (planted & m1).count(), i2 = (planted & m2).count(), i3 = (planted & m3).count();
    bool hit = i1 == want && i2 == want && i3 == want;
    hits += hit;
    rep.csv += rep.suite + "," + std::to_string(detail::row_seed(seed, i)) + "," + preset + "," +
               std::to_string(i) + "," + std::to_string(i1) + "," + std::to_string(i2) + "," +
               std::to_string(i3) + "," + (hit ? "1" : "0") + "\n";
  }
  double freq = (double)hits / trials;
  double threshold = 1.0 / (10.0 * std::pow((double)n, 1.5));
  rep.pass = freq >= threshold;
  rep.summary = "balanced-split frequency " + detail::fmt(freq) + " (need >= " +
                detail::fmt(threshold) + ")";
  rep.csv += "summary," + std::to_string(seed) + "," + preset + ",," +
             detail::fmt(freq) + ",,," + (rep.pass ? "1" : "0") + "\n";
  return rep;
}

// Measured |L1| against the counting prediction W_L / p_L on perfect mixers.
inline ExperimentReport list_sizes_suite(uint64_t seed, int trials, const std::string& preset) {
  if (trials <= 0) trials = 50;
  const int n = 20, m = 4, lc = 2, s = 1;
  Rng gen(seed);
  SubsetSumInstance inst = generate_instance(gen, InstanceKind::powers, n, 16);

  ExperimentReport rep;
  rep.suite = "list-sizes";
  rep.csv = "suite,seed,preset,trial,p_l,l1_size,w_l,prediction,ratio\n";
  double ratio_sum = 0;
  for (int i = 0; i < trials; ++i) {
    Rng r(detail::row_seed(seed, i));
    IndexSet univ = IndexSet::full(n);
    IndexSet ml = random_subset(r, univ, m);
    IndexSet mid = random_subset(r, univ - ml, m);
    IndexSet mr = random_subset(r, univ - ml - mid, m);
    LevelTwoLists lists = build_level_two_lists(r, inst, ml, mid, mr, lc, s, s, s);
    double w_l = std::exp2((double)lists.part_l.count()) * binomial(m, s);
    double prediction = w_l / (double)lists.p_l;
    double ratio = (double)lists.l1.size() * (double)lists.p_l / w_l;
    ratio_sum += ratio;
    rep.csv += rep.suite + "," + std::to_string(detail::row_seed(seed, i)) + "," + preset + "," +
               std::to_string(i) + "," + std::to_string(lists.p_l) + "," +
               std::to_string(lists.l1.size()) + "," + detail::fmt(w_l) + "," +
               detail::fmt(prediction) + "," + detail::fmt(ratio) + "\n";
  }
  double mean = ratio_sum / trials;
  rep.pass = mean >= 1.0 / 8 && mean <= 8.0;
  rep.summary = "mean |L1| * p_L / W_L = " + detail::fmt(mean) + " (need within [1/8, 8])";
  rep.csv += "summary," + std::to_string(seed) + "," + preset + ",,,,," + detail::fmt(mean) + "," +
             (rep.pass ? "1" : "0") + "\n";
  return rep;
}

// Cover construction quality across the three desk shapes.
inline ExperimentReport cover_sparsity_suite(uint64_t seed, int trials,
                                             const std::string& preset) {
  if (trials <= 0) trials = 100;
  ExperimentReport rep;
  rep.suite = "cover-sparsity";
  rep.csv = "suite,seed,preset,d,p,q,trial,x,z,sparsity,analytic_bound,floor_value,ratio_bound,"
            "ratio_floor,valid\n";
  const int shapes[3][3] = {{8, 2, 2}, {12, 3, 3}, {16, 4, 4}};
  bool all_pass = true;
  std::string lines;
  for (auto& sh : shapes) {
    int valid_count = 0, bound_ok = 0, floor_ok = 0, checked = 0;
    for (int i = 0; i < trials; ++i) {
      Rng r(detail::row_seed(seed, i) ^ ((uint64_t)sh[0] << 32));
      OneCover cover = build_cover(r, sh[0], sh[1], sh[2]);
      SparsityReport sr = measure_sparsity(cover);
      bool valid = cover_validity(cover);
      valid_count += valid;
      if (valid) {
        ++checked;
        bound_ok += sr.sparsity <= 64.0 * sr.analytic_bound;
        floor_ok += sr.sparsity >= sr.floor_value;
      }
      rep.csv += rep.suite + "," + std::to_string(detail::row_seed(seed, i)) + "," + preset + "," +
                 std::to_string(sh[0]) + "," + std::to_string(sh[1]) + "," +
                 std::to_string(sh[2]) + "," + std::to_string(i) + "," + std::to_string(cover.x) +
                 "," + std::to_string(cover.certificates.size()) + "," + detail::fmt(sr.sparsity) +
                 "," + detail::fmt(sr.analytic_bound) + "," + detail::fmt(sr.floor_value) + "," +
                 detail::fmt(sr.sparsity / sr.analytic_bound) + "," +
                 detail::fmt(sr.sparsity / sr.floor_value) + "," + (valid ? "1" : "0") + "\n";
    }
    bool shape_pass = valid_count >= (trials * 3 + 3) / 4 && bound_ok == checked &&
                      floor_ok == checked;
    all_pass = all_pass && shape_pass;
    lines += " d=" + std::to_string(sh[0]) + " valid=" + std::to_string(valid_count) + "/" +
             std::to_string(trials);
    rep.csv += "summary," + std::to_string(seed) + "," + preset + "," + std::to_string(sh[0]) +
               "," + std::to_string(sh[1]) + "," + std::to_string(sh[2]) + ",," +
               std::to_string(valid_count) + "," + std::to_string(trials) + ",,,,,," +
               (shape_pass ? "1" : "0") + "\n";
  }
  rep.pass = all_pass;
  rep.summary = "cover validity" + lines;
  return rep;
}

// End-to-end recovery rate on planted instances.
inline ExperimentReport success_rate_suite(uint64_t seed, int trials, const SolverConfig& cfg,
                                           const std::string& preset) {
  if (trials <= 0) trials = 30;
  ExperimentReport rep;
  rep.suite = "success-rate";
  rep.csv = "suite,seed,preset,trial,answer,branch,reps_used,recovered\n";
  int recovered = 0;
  for (int i = 0; i < trials; ++i) {
    Rng r(detail::row_seed(seed, i));
    SubsetSumInstance inst = generate_instance(r, InstanceKind::planted, 16, 20);
    SolveOutcome outcome;
    auto sol = solve(r, inst, cfg, Detector::weighted_ov, nullptr, &outcome);
    recovered += sol.has_value();
    rep.csv += rep.suite + "," + std::to_string(detail::row_seed(seed, i)) + "," + preset + "," +
               std::to_string(i) + "," + (sol ? "yes" : "no") + "," + outcome.branch + "," +
               std::to_string(outcome.reps_used) + "," + (sol ? "1" : "0") + "\n";
  }
  double frac = (double)recovered / trials;
  rep.pass = frac >= 0.90;
  rep.summary = "planted recovery " + detail::fmt(frac) + " (need >= 0.9)";
  rep.csv += "summary," + std::to_string(seed) + "," + preset + ",," + detail::fmt(frac) +
             ",,," + (rep.pass ? "1" : "0") + "\n";
  return rep;
}

// The two-block OV exponent inequality on its verification grid.
inline ExperimentReport ov_inequality_suite(uint64_t seed, const std::string& preset) {
  std::vector<double> lambdas, sigmas;
  for (int i = 40; i <= 50; ++i) lambdas.push_back(i / 100.0);
  for (int i = 40; i <= 60; ++i) sigmas.push_back(i / 100.0);
  OvInequalityReport ineq = verify_ov_inequality(lambdas, sigmas, 1e-3);

  ExperimentReport rep;
  rep.suite = "ov-inequality";
  rep.csv = "suite,seed,preset," + OvInequalityReport::csv_header() + "\n";
  for (const auto& row : ineq.rows)
    rep.csv += rep.suite + "," + std::to_string(seed) + "," + preset + "," +
               detail::fmt(row.lambda) + "," + detail::fmt(row.sigma) + "," +
               detail::fmt(row.x_star) + "," + detail::fmt(row.lhs_exponent) + "," +
               detail::fmt(row.rhs_exponent) + "," + detail::fmt(row.margin) + "\n";
  rep.pass = ineq.violations == 0;
  rep.summary = std::to_string(ineq.violations) + " violations over " +
                std::to_string(ineq.rows.size()) + " grid points";
  rep.csv += "summary," + std::to_string(seed) + "," + preset + ",,,,," +
             std::to_string(ineq.violations) + "," + (rep.pass ? "1" : "0") + "\n";
  return rep;
}

inline ExperimentReport run_experiment(const std::string& suite, uint64_t seed, int trials,
                                       const SolverConfig& cfg, const std::string& preset) {
  if (suite == "mixer-coverage") return mixer_coverage_suite(seed, trials, preset);
  if (suite == "split-balance") return split_balance_suite(seed, trials, cfg, preset);
  if (suite == "list-sizes") return list_sizes_suite(seed, trials, preset);
  if (suite == "cover-sparsity") return cover_sparsity_suite(seed, trials, preset);
  if (suite == "success-rate") return success_rate_suite(seed, trials, cfg, preset);
  if (suite == "ov-inequality") return ov_inequality_suite(seed, preset);
  throw std::invalid_argument("unknown experiment suite: " + suite);
}

}  // namespace sss
