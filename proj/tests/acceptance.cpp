/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
// Acceptance suite: one PASS/FAIL line per criterion.

#include <kscope/analysis.hpp>
#include <kscope/batch.hpp>
#include <kscope/conditioning.hpp>
#include <kscope/cuts.hpp>
#include <kscope/generator.hpp>
#include <kscope/lu_factors.hpp>
#include <kscope/simplex.hpp>
#include <kscope/telemetry.hpp>
#include <kscope/tree.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace kscope;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* name, bool pass, const std::string& detail)
{
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) { ++failures; }
}

template <typename... T>
std::string fmt(const char* f, T... args)
{
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void kappa_accuracy()
{
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  const int sizes[] = {5, 20, 50};
  std::vector<oracle::planted_t> cases;
  for (int k = 0; k < 100; ++k) {
    cases.push_back(oracle::planted_matrix(sizes[k % 3], std::pow(10.0, u(rng)), rng));
  }
  double worst = 0.0;
  int within   = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : cases) {
    const auto lu  = lu_factors_t::factorize(c.matrix);
    const auto est = kappa2(c.matrix, lu);
    const double e = std::abs(est.kappa - c.kappa) / c.kappa;
    worst          = std::max(worst, e);
    within += e <= 0.01;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report("kappa-estimator-accuracy", within == 100 && secs < 5.0,
         fmt("%d/100 within 1%% (max rel err %.2e), %.3f s", within, worst, secs));
}

void lp_oracle()
{
  int agree = 0, optimal = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1000; seed < 1050; ++seed) {
    const auto lp  = oracle::random_bounded_lp(seed);
    const auto ref = oracle::vertex_enumeration(lp);
    const auto sol = solve_primal(lp);
    if (!ref.feasible) {
      agree += sol.status == lp_status_t::infeasible;
      continue;
    }
    ++optimal;
    if (sol.status != lp_status_t::optimal) { continue; }
    const double e = std::abs(sol.objective - ref.objective) / std::max(1.0, std::abs(ref.objective));
    worst          = std::max(worst, e);
    agree += e <= 1e-6;
  }
  report("lp-oracle-equivalence", agree == 50,
         fmt("%d/50 agree (%d optimal, %d infeasible), max rel err %.2e", agree, optimal,
             50 - optimal, worst));
}

std::vector<instance_t> milp_suite()
{
  std::vector<instance_t> out;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    out.push_back(oracle::random_milp(seed, seed % 4 == 3));
  }
  return out;
}

void milp_exactness()
{
  const auto suite = milp_suite();
  int ok_off = 0, ok_all = 0;
  for (const auto& inst : suite) {
    const auto ref = oracle::lattice_enumeration(inst);
    for (auto mode : {cuts_mode_t::off, cuts_mode_t::everywhere}) {
      solver_config_t cfg;
      cfg.cuts_mode = mode;
      const auto r  = solve(inst, cfg);
      bool ok;
      if (!ref.feasible) {
        ok = r.status == solve_status_t::infeasible;
      } else {
        const bool mixed = inst.num_integer() < inst.num_cols();
        ok               = r.status == solve_status_t::optimal &&
             (mixed ? std::abs(*r.objective - ref.objective) <=
                        1e-6 * std::max(1.0, std::abs(ref.objective))
                    : *r.objective == ref.objective);
      }
      (mode == cuts_mode_t::off ? ok_off : ok_all) += ok;
    }
  }
  report("milp-exactness", ok_off == 20 && ok_all == 20,
         fmt("cuts off %d/20, cuts everywhere %d/20", ok_off, ok_all));
}

void cut_validity()
{
  const auto suite = milp_suite();
  long generated = 0, violated_points = 0, applied = 0, nonpositive = 0;
  for (const auto& inst : suite) {
    solver_config_t cfg;
    cfg.cuts_mode = cuts_mode_t::everywhere;
    solve_hooks_t hooks;
    hooks.on_cuts = [&](const node_t& node, const lp_relaxation_t&, const std::vector<double>& x,
                        const std::vector<cut_candidate_t>& cands) {
      const auto points = oracle::feasible_points(inst, node.lower, node.upper);
      for (const auto& c : cands) {
        ++generated;
        for (const auto& p : points) {
          if (c.coeffs.dot(p) < c.rhs - 1e-6 * std::max(1.0, std::abs(c.rhs))) {
            ++violated_points;
            break;
          }
        }
        if (c.verdict == cut_verdict_t::accepted) {
          ++applied;
          if (!(c.efficacy > 0.0 && c.violation(x) > 0.0)) { ++nonpositive; }
        }
      }
    };
    solve(inst, cfg, nullptr, {}, hooks);
  }
  report("cut-validity", violated_points == 0 && nonpositive == 0 && applied > 0,
         fmt("%ld cuts generated, %ld exclude a feasible point; %ld applied, %ld without "
             "positive efficacy",
             generated, violated_points, applied, nonpositive));
}

batch_config_t desk_config(const fs::path& out)
{
  batch_config_t cfg;
  for (const char* fam : {"knapsack", "setcover", "packing"}) {
    for (int seed = 1; seed <= 4; ++seed) {
      cfg.instances.push_back(std::string("gen:") + fam + ":" + std::to_string(seed));
    }
  }
  cfg.solver.kappa_every_iteration = true;
  cfg.out                          = out.string();
  cfg.jobs = static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency())));
  return cfg;
}

struct desk_run_t {
  manifest_t manifest;
  comparison_t comparison;
  fs::path dir;
  int exit_code{0};
  double seconds{0.0};
};

desk_run_t run_desk(const fs::path& dir)
{
  fs::remove_all(dir);
  desk_run_t out;
  out.dir       = dir;
  std::ostringstream log;
  const auto t0 = std::chrono::steady_clock::now();
  out.exit_code = run_batch(desk_config(dir), log);
  out.seconds   = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.manifest  = read_manifest_file((dir / "manifest.json").string());
  out.comparison = compare_arms(out.manifest, dir.string());
  return out;
}

void fig1_shape(const desk_run_t& run)
{
  int instances = 0, start_ok = 0, need_pivot = 0, grew = 0;
  for (const auto& r : run.manifest.runs) {
    if (r.arm != "cuts" || r.exit_code != 0) { continue; }
    const auto events = read_stream_file((run.dir / r.telemetry).string()).events;
    const auto s      = root_series(events);
    ++instances;
    start_ok += s.points.front().iteration == 0 && s.points.front().log10_kappa == 0.0;
    const int end = s.round_boundaries.empty() ? INT32_MAX : s.round_boundaries.front();
    double max_log = 0.0;
    bool pivoted   = false;
    for (const auto& p : s.points) {
      if (p.iteration >= end) { break; }
      pivoted = pivoted || p.iteration > 0;
      max_log = std::max(max_log, p.log10_kappa);
    }
    if (pivoted) {
      ++need_pivot;
      grew += max_log > 0.0;
    }
  }
  report("fig1-root-trajectory", instances >= 10 && start_ok == instances && grew == need_pivot,
         fmt("%d instances, %d start at kappa=1, %d/%d pivoting first solves exceed kappa 1",
             instances, start_ok, grew, need_pivot));
}

void fig2_direction(const desk_run_t& run)
{
  int with_cuts = 0, increased = 0;
  for (const auto& row : run.comparison.rows) {
    if (!row.root || !row.root->kappa_final) { continue; }
    ++with_cuts;
    increased += *row.root->kappa_final >= row.root->kappa_original;
  }
  report("fig2-cuts-raise-root-kappa", with_cuts > 0 && 2 * increased > with_cuts,
         fmt("final >= original on %d of %d instances with root cuts", increased, with_cuts));
}

void fig3_direction(const desk_run_t& run)
{
  const auto& d = run.comparison.deltas;
  const bool ok = d.cut_mean && d.branch_mean && *d.cut_mean > *d.branch_mean && *d.cut_mean > 0.0;
  report("fig3-cut-vs-branch-delta", ok,
         fmt("mean log10 cut delta %.4f over %d instances, branch delta %.4f over %d instances",
             d.cut_mean.value_or(NAN), d.cut_instances, d.branch_mean.value_or(NAN),
             d.branch_instances));
}

void fig4_direction(const desk_run_t& run)
{
  const auto& c = run.comparison;
  const bool ok = c.mean_slope_cuts && c.mean_slope_nocuts &&
                  *c.mean_slope_cuts >= *c.mean_slope_nocuts;
  int with = 0, without = 0;
  for (const auto& row : c.rows) {
    with += row.slope_cuts.has_value();
    without += row.slope_nocuts.has_value();
  }
  report("fig4-depth-slope", ok,
         fmt("mean slope with cuts %.4f (%d instances), without %.4f (%d instances)",
             c.mean_slope_cuts.value_or(NAN), with, c.mean_slope_nocuts.value_or(NAN), without));
}

void protocol_constants()
{
  const solver_config_t defaults;
  const bool constants = defaults.node_limit == 10000 && defaults.time_limit == 3600.0 &&
                         defaults.cuts_mode == cuts_mode_t::everywhere;
  solver_config_t cfg;
  cfg.cuts_mode = cuts_mode_t::off;
  const auto r  = solve(jeroslow(31), cfg);
  const bool capped = r.status == solve_status_t::limit && r.nodes_processed == cfg.node_limit;
  report("protocol-constants", constants && capped,
         fmt("node_limit=%d time_limit=%g; deep instance stopped at %d nodes (%s)",
             defaults.node_limit, defaults.time_limit, r.nodes_processed, to_string(r.status)));
}

void determinism(const desk_run_t& a, const desk_run_t& b)
{
  int same = 0;
  for (const auto& f : a.manifest.files) {
    same += slurp(a.dir / f.path) == slurp(b.dir / f.path);
  }
  const bool manifests = slurp(a.dir / "manifest.json") == slurp(b.dir / "manifest.json");
  const int total      = static_cast<int>(a.manifest.files.size());
  report("determinism", manifests && same == total && total > 0,
         fmt("%d/%d files byte-identical, manifests %s", same, total,
             manifests ? "identical" : "differ"));
}

}  // namespace

int main(int argc, char** argv)
{
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "kscope_acceptance";

  kappa_accuracy();
  lp_oracle();
  milp_exactness();
  cut_validity();

  const auto first  = run_desk(work / "run_a");
  const auto second = run_desk(work / "run_b");
  std::printf("# desk batch: %zu runs, exit %d, %.1f s and %.1f s\n", first.manifest.runs.size(),
              first.exit_code, first.seconds, second.seconds);
  fig1_shape(first);
  fig2_direction(first);
  fig3_direction(first);
  fig4_direction(first);
  protocol_constants();
  determinism(first, second);

  std::printf("# %d criteria failed\n", failures);
  return failures ? 1 : 0;
}
