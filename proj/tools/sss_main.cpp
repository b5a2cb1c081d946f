// Command line surface. Batch only: every run reads flags, does one job,
// writes one record to stdout (or --out) and wall time to stderr, so stdout
// is byte-stable for fixed seed and config.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sss/sss.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

struct CommonOpts {
  uint64_t seed = 1;
  std::string preset = "desk";
  int trials = 0;
  std::string format = "text";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--preset", c.preset, "constant preset")
      ->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--trials", c.trials, "trial count (0: per-suite default)");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--out", c.out_path, "write the record to a file instead of stdout");
}

sss::SolverConfig make_config(const CommonOpts& c) {
  return c.preset == "paper" ? sss::SolverConfig::paper() : sss::SolverConfig::desk();
}

std::string solution_indices(const std::optional<sss::Solution>& sol) {
  return sol ? sol->subset.to_index_string() : std::string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subset sum solver toolkit"};
  app.require_subcommand(1);

  // ---- solve ----------------------------------------------------------
  CommonOpts solve_c;
  std::string solve_file, solve_algo = "rep";
  double budget_exponent = 1.0;
  double opt_mu = -1, opt_lambda0 = -1, opt_eps0 = -1;
  int opt_blocks = 0;
  uint64_t opt_crossover = 0;
  int64_t opt_cell_cap = 0;
  int opt_reps = 0;
  auto* cmd_solve = app.add_subcommand("solve", "solve one instance file");
  add_common(cmd_solve, solve_c);
  cmd_solve->add_option("file", solve_file, "instance file")->required();
  cmd_solve->add_option("--algo", solve_algo, "solver")
      ->check(CLI::IsMember({"bruteforce", "mitm", "ss", "rep", "rep-p4", "budget"}));
  cmd_solve->add_option("--budget-exponent", budget_exponent, "space exponent for --algo budget");
  cmd_solve->add_option("--mu", opt_mu, "override mixer fraction");
  cmd_solve->add_option("--lambda0", opt_lambda0, "override small-cardinality threshold");
  cmd_solve->add_option("--eps0", opt_eps0, "override mixing threshold");
  cmd_solve->add_option("--cover-blocks", opt_blocks, "override OV block count");
  cmd_solve->add_option("--crossover", opt_crossover, "override naive-OV crossover");
  cmd_solve->add_option("--cell-cap", opt_cell_cap, "override weight-cell cross product cap");
  cmd_solve->add_option("--reps", opt_reps, "override outer repetitions");

  // ---- gen ------------------------------------------------------------
  CommonOpts gen_c;
  std::string gen_kind = "uniform";
  int gen_n = 16, gen_bits = 20;
  auto* cmd_gen = app.add_subcommand("gen", "generate an instance");
  add_common(cmd_gen, gen_c);
  cmd_gen->add_option("--kind", gen_kind, "instance family")
      ->check(CLI::IsMember({"uniform", "planted", "low-mixing", "powers"}));
  cmd_gen->add_option("--n", gen_n, "element count")->required();
  cmd_gen->add_option("--bit-width", gen_bits, "weight bit width");

  // ---- experiment -----------------------------------------------------
  CommonOpts exp_c;
  std::string exp_suite;
  auto* cmd_exp = app.add_subcommand("experiment", "run a measurement suite");
  add_common(cmd_exp, exp_c);
  cmd_exp->add_option("suite", exp_suite, "suite name")
      ->required()
      ->check(CLI::IsMember({"mixer-coverage", "split-balance", "list-sizes", "cover-sparsity",
                             "success-rate", "ov-inequality"}));

  // ---- verify-ineq ----------------------------------------------------
  CommonOpts ineq_c;
  auto* cmd_ineq = app.add_subcommand("verify-ineq", "check the analytic inequalities");
  add_common(cmd_ineq, ineq_c);

  // ---- cover ----------------------------------------------------------
  CommonOpts cover_c;
  int cover_d = 12, cover_p = 3, cover_q = 3, cover_x = sss::kCoverAutoX;
  bool cover_check = false;
  auto* cmd_cover = app.add_subcommand("cover", "build and measure a 1-cover");
  add_common(cmd_cover, cover_c);
  cmd_cover->add_option("--d", cover_d, "dimension")->required();
  cmd_cover->add_option("--p", cover_p, "row subset size")->required();
  cmd_cover->add_option("--q", cover_q, "column subset size")->required();
  cmd_cover->add_option("--x", cover_x, "certificate size (-1: auto)");
  cmd_cover->add_flag("--check", cover_check, "run exhaustive validity (d <= 16)");

  // ---- p4-dump --------------------------------------------------------
  CommonOpts p4_c;
  std::string p4_file;
  int p4_m = 0, p4_lc = -1;
  auto* cmd_p4 = app.add_subcommand("p4-dump", "build the path-graph reduction and dump it");
  add_common(cmd_p4, p4_c);
  cmd_p4->add_option("file", p4_file, "instance file")->required();
  cmd_p4->add_option("--m", p4_m, "mixer size (0: preset default)");
  cmd_p4->add_option("--lc", p4_lc, "mixer intersection size (-1: half of m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (cmd_solve->parsed()) {
      sss::SolverConfig cfg = make_config(solve_c);
      if (opt_mu >= 0) cfg.mu = opt_mu;
      if (opt_lambda0 >= 0) cfg.lambda0 = opt_lambda0;
      if (opt_eps0 >= 0) cfg.eps0 = opt_eps0;
      if (opt_blocks > 0) cfg.cover_blocks = opt_blocks;
      if (opt_crossover > 0) cfg.ov_crossover = opt_crossover;
      if (opt_cell_cap > 0) cfg.cell_cap = opt_cell_cap;
      if (opt_reps > 0) cfg.reps = opt_reps;

      sss::SubsetSumInstance inst = sss::parse_instance(read_file(solve_file));
      sss::Rng rng(solve_c.seed);
      sss::MemoryMeter meter;
      sss::SolveOutcome outcome;
      std::optional<sss::Solution> sol;
      if (solve_algo == "bruteforce") sol = sss::brute_force_solve(inst);
      else if (solve_algo == "mitm") sol = sss::mitm_solve(inst, &meter);
      else if (solve_algo == "ss") sol = sss::schroeppel_shamir_solve(inst, &meter);
      else if (solve_algo == "rep")
        sol = sss::solve(rng, inst, cfg, sss::Detector::weighted_ov, &meter, &outcome);
      else if (solve_algo == "rep-p4") sol = sss::solve_via_p4(rng, inst, cfg, &meter, &outcome);
      else sol = sss::solve_with_space_budget(rng, inst, budget_exponent, cfg, &meter);

      bool rep_like = solve_algo == "rep" || solve_algo == "rep-p4";
      if (solve_c.format == "json") {
        json j;
        j["answer"] = sol ? "yes" : "no";
        j["indices"] = solution_indices(sol);
        j["sum"] = sol ? sss::to_string(sol->achieved_sum) : "";
        j["algo"] = solve_algo;
        j["n"] = inst.n;
        j["seed"] = solve_c.seed;
        j["preset"] = solve_c.preset;
        j["peak_payload"] = meter.peak;
        if (rep_like) {
          j["branch"] = outcome.branch;
          j["complemented"] = outcome.complemented;
          j["eps"] = outcome.eps;
          j["eps_l"] = outcome.eps_l;
          j["eps_r"] = outcome.eps_r;
          j["reps_used"] = outcome.reps_used;
          j["p_l"] = outcome.detail.p_l;
          j["p_r"] = outcome.detail.p_r;
          j["x"] = outcome.detail.x;
          j["x_l"] = outcome.detail.x_l;
          j["x_r"] = outcome.detail.x_r;
          j["lambda_count"] = outcome.detail.lambda_count;
          j["sizes"] = {outcome.detail.s, outcome.detail.s_l, outcome.detail.s_r};
          j["list_sizes"] = {outcome.detail.n_l1, outcome.detail.n_l2, outcome.detail.n_r2,
                             outcome.detail.n_r1};
          j["cells_skipped"] = outcome.detail.cells_skipped;
          j["combos_tried"] = outcome.detail.combos_tried;
        }
        write_output(solve_c.out_path, j.dump(2) + "\n");
      } else if (solve_c.format == "csv") {
        std::string csv =
            "answer,indices,algo,n,seed,preset,branch,peak_payload\n" +
            std::string(sol ? "yes" : "no") + ",\"" + solution_indices(sol) + "\"," + solve_algo +
            "," + std::to_string(inst.n) + "," + std::to_string(solve_c.seed) + "," +
            solve_c.preset + "," + (rep_like ? outcome.branch : "") + "," +
            std::to_string(meter.peak) + "\n";
        write_output(solve_c.out_path, csv);
      } else {
        std::string rec;
        rec += "answer: " + std::string(sol ? "yes" : "no") + "\n";
        if (sol) rec += sol->serialize();
        rec += "algo: " + solve_algo + "\n";
        rec += "n: " + std::to_string(inst.n) + "\n";
        rec += "seed: " + std::to_string(solve_c.seed) + "\n";
        rec += "preset: " + solve_c.preset + "\n";
        rec += "peak_payload: " + std::to_string(meter.peak) + "\n";
        if (rep_like) {
          rec += "branch: " + outcome.branch + "\n";
          rec += "complemented: " + std::string(outcome.complemented ? "yes" : "no") + "\n";
          char buf[160];
          snprintf(buf, sizeof buf, "eps: %.6g\neps_l: %.6g\neps_r: %.6g\n", outcome.eps,
                   outcome.eps_l, outcome.eps_r);
          rec += buf;
          rec += "reps_used: " + std::to_string(outcome.reps_used) + "\n";
          rec += "p_l: " + std::to_string(outcome.detail.p_l) + "\n";
          rec += "p_r: " + std::to_string(outcome.detail.p_r) + "\n";
          rec += "residues: " + std::to_string(outcome.detail.x) + " " +
                 std::to_string(outcome.detail.x_l) + " " + std::to_string(outcome.detail.x_r) +
                 "\n";
          rec += "lambda_count: " + std::to_string(outcome.detail.lambda_count) + "\n";
          rec += "sizes: " + std::to_string(outcome.detail.s) + " " +
                 std::to_string(outcome.detail.s_l) + " " + std::to_string(outcome.detail.s_r) +
                 "\n";
          rec += "list_sizes: " + std::to_string(outcome.detail.n_l1) + " " +
                 std::to_string(outcome.detail.n_l2) + " " + std::to_string(outcome.detail.n_r2) +
                 " " + std::to_string(outcome.detail.n_r1) + "\n";
          rec += "cells_skipped: " + std::to_string(outcome.detail.cells_skipped) + "\n";
          rec += "combos_tried: " + std::to_string(outcome.detail.combos_tried) + "\n";
        }
        write_output(solve_c.out_path, rec);
      }
    } else if (cmd_gen->parsed()) {
      auto kind = sss::instance_kind_from(gen_kind);
      sss::Rng rng(gen_c.seed);
      sss::SubsetSumInstance inst = sss::generate_instance(rng, *kind, gen_n, gen_bits);
      write_output(gen_c.out_path, sss::serialize_instance(inst));
    } else if (cmd_exp->parsed()) {
      sss::SolverConfig cfg = make_config(exp_c);
      sss::ExperimentReport rep =
          sss::run_experiment(exp_suite, exp_c.seed, exp_c.trials, cfg, exp_c.preset);
      if (exp_c.format == "json") {
        json j;
        j["suite"] = rep.suite;
        j["pass"] = rep.pass;
        j["summary"] = rep.summary;
        j["csv"] = rep.csv;
        write_output(exp_c.out_path, j.dump(2) + "\n");
      } else if (exp_c.format == "text") {
        write_output(exp_c.out_path, rep.suite + ": " + (rep.pass ? "pass" : "FAIL") + ", " +
                                         rep.summary + "\n");
      } else {
        write_output(exp_c.out_path, rep.csv);
      }
    } else if (cmd_ineq->parsed()) {
      std::vector<double> lambdas, sigmas;
      for (int i = 40; i <= 50; ++i) lambdas.push_back(i / 100.0);
      for (int i = 40; i <= 60; ++i) sigmas.push_back(i / 100.0);
      sss::OvInequalityReport ov = sss::verify_ov_inequality(lambdas, sigmas, 1e-3);
      sss::EntropyInequalityReport ent = sss::entropy_inequality_suite();
      if (ineq_c.format == "json") {
        json j;
        j["ov_grid_points"] = ov.rows.size();
        j["ov_violations"] = ov.violations;
        j["entropy_checked"] = ent.checked;
        j["entropy_violations"] = ent.violations;
        j["entropy_worst_slack"] = ent.worst_slack;
        write_output(ineq_c.out_path, j.dump(2) + "\n");
      } else if (ineq_c.format == "csv") {
        std::string csv = sss::OvInequalityReport::csv_header() + "\n";
        for (const auto& row : ov.rows) {
          char buf[200];
          snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", row.lambda, row.sigma,
                   row.x_star, row.lhs_exponent, row.rhs_exponent, row.margin);
          csv += buf;
        }
        write_output(ineq_c.out_path, csv);
      } else {
        char buf[300];
        snprintf(buf, sizeof buf,
                 "ov inequality: %d violations over %zu grid points\n"
                 "entropy inequalities: %d violations over %d checks (worst slack %.6g)\n",
                 ov.violations, ov.rows.size(), ent.violations, ent.checked, ent.worst_slack);
        write_output(ineq_c.out_path, buf);
      }
    } else if (cmd_cover->parsed()) {
      sss::Rng rng(cover_c.seed);
      sss::OneCover cover = sss::build_cover(rng, cover_d, cover_p, cover_q, cover_x);
      sss::SparsityReport rep = sss::measure_sparsity(cover);
      bool valid = false;
      if (cover_check) valid = sss::cover_validity(cover);
      if (cover_c.format == "json") {
        json j;
        j["d"] = rep.d;
        j["p"] = rep.p;
        j["q"] = rep.q;
        j["x"] = rep.x;
        j["z"] = rep.z;
        j["sparsity"] = rep.sparsity;
        j["analytic_bound"] = rep.analytic_bound;
        j["floor_value"] = rep.floor_value;
        j["seed"] = cover_c.seed;
        if (cover_check) j["valid"] = valid;
        write_output(cover_c.out_path, j.dump(2) + "\n");
      } else if (cover_c.format == "csv") {
        std::string csv = sss::SparsityReport::csv_header() + "\n" + rep.csv_row() + "\n";
        write_output(cover_c.out_path, csv);
      } else {
        char buf[300];
        snprintf(buf, sizeof buf,
                 "d=%d p=%d q=%d x=%d z=%llu\nsparsity: %.6g\nanalytic_bound: %.6g\nfloor: %.6g\n",
                 rep.d, rep.p, rep.q, rep.x, (unsigned long long)rep.z, rep.sparsity,
                 rep.analytic_bound, rep.floor_value);
        std::string out = buf;
        if (cover_check) out += std::string("valid: ") + (valid ? "yes" : "no") + "\n";
        write_output(cover_c.out_path, out);
      }
    } else if (cmd_p4->parsed()) {
      sss::SubsetSumInstance inst = sss::parse_instance(read_file(p4_file));
      sss::SolverConfig cfg = make_config(p4_c);
      sss::Rng rng(p4_c.seed);
      int m = p4_m > 0 ? p4_m : (int)std::lround(cfg.mu * inst.n);
      if (m < 1 || 3 * m > inst.n)
        throw std::invalid_argument("p4-dump: mixer size infeasible for this n");
      int lc = p4_lc >= 0 ? p4_lc : m / 2;
      sss::IndexSet univ = sss::IndexSet::full(inst.n);
      sss::IndexSet mid = sss::random_subset(rng, univ, m);
      sss::IndexSet ml = sss::random_subset(rng, univ - mid, m);
      sss::IndexSet mr = sss::random_subset(rng, univ - mid - ml, m);
      int s = lc / 2;
      sss::LevelTwoLists lists =
          sss::build_level_two_lists(rng, inst, ml, mid, mr, lc, s, s, s);
      sss::NodeWeightedGraph g = sss::build_p4_graph(lists, inst.target);
      write_output(p4_c.out_path, sss::dump_graph(g));
    }
  } catch (const sss::parse_error& e) {
    std::cerr << "parse error at " << e.line << ":" << e.col << ": " << e.what() << "\n";
    rc = 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    rc = 3;
  } catch (const std::length_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    rc = 3;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    rc = 3;
  }
  auto t1 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "wall_ms: %lld\n",
               (long long)std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
  return rc;
}
