/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/tree.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

namespace kscope {

const char* to_string(cuts_mode_t m)
{
  switch (m) {
    case cuts_mode_t::off: return "off";
    case cuts_mode_t::root_only: return "root_only";
    case cuts_mode_t::everywhere: return "everywhere";
  }
  return "unknown";
}

std::optional<cuts_mode_t> parse_cuts_mode(const std::string& s)
{
  if (s == "off") { return cuts_mode_t::off; }
  if (s == "root_only") { return cuts_mode_t::root_only; }
  if (s == "everywhere") { return cuts_mode_t::everywhere; }
  return std::nullopt;
}

const char* to_string(node_status_t s)
{
  switch (s) {
    case node_status_t::open: return "open";
    case node_status_t::branched: return "branched";
    case node_status_t::fathomed_bound: return "fathomed_bound";
    case node_status_t::fathomed_infeasible: return "fathomed_infeasible";
    case node_status_t::fathomed_integral: return "fathomed_integral";
  }
  return "unknown";
}

const char* to_string(solve_status_t s)
{
  switch (s) {
    case solve_status_t::optimal: return "Optimal";
    case solve_status_t::limit: return "Limit";
    case solve_status_t::infeasible: return "Infeasible";
    case solve_status_t::unbounded: return "Unbounded";
  }
  return "Unknown";
}

int select_branching_variable(std::span<const double> x,
                              const std::vector<bool>& is_integer,
                              double tol_int)
{
  int best         = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!is_integer[j]) { continue; }
    const double f = x[j] - std::floor(x[j]);
    if (f < tol_int || f > 1.0 - tol_int) { continue; }
    const double dist = std::abs(f - 0.5);
    // Distances within 1e-9 count as ties and keep the smaller index.
    if (dist < best_dist - 1e-9) {
      best_dist = dist;
      best      = static_cast<int>(j);
    }
  }
  if (best < 0) { throw no_fractional_error(); }
  return best;
}

std::pair<node_t, node_t> branch(const node_t& parent, int var, double value, int next_id)
{
  auto child = [&](int id) {
    node_t c;
    c.id           = id;
    c.depth        = parent.depth + 1;
    c.parent       = parent.id;
    c.lower        = parent.lower;
    c.upper        = parent.upper;
    c.cuts         = parent.cuts;
    c.lp_bound     = parent.lp_bound;
    c.warm_basis   = parent.warm_basis;
    c.parent_kappa = parent.parent_kappa;
    c.branch_var   = var;
    return c;
  };
  node_t down = child(next_id);
  node_t up   = child(next_id + 1);
  down.upper[var] = std::min(down.upper[var], std::floor(value));
  up.lower[var]   = std::max(up.lower[var], std::ceil(value));
  return {std::move(down), std::move(up)};
}

std::size_t select_next_node(std::span<const node_t> open, obj_sense_t sense)
{
  if (open.empty()) { throw empty_tree_error(); }
  const double sign = sense == obj_sense_t::maximize ? -1.0 : 1.0;
  std::size_t best  = 0;
  for (std::size_t k = 1; k < open.size(); ++k) {
    const double a = sign * open[k].lp_bound;
    const double b = sign * open[best].lp_bound;
    if (a < b || (a == b && open[k].id < open[best].id)) { best = k; }
  }
  return best;
}

condition_estimate_t basis_condition(const lp_relaxation_t& lp,
                                     const std::vector<int>& columns,
                                     const lu_factors_t& lu,
                                     const power_options_t& opts)
{
  if (columns.empty()) { return condition_estimate_t{1.0, 1.0, 1.0, 0, 0, true}; }
  const auto B = assemble_basis(lp, columns);
  return kappa2(B, lu, opts);
}

namespace {

class branch_and_cut_t {
 public:
  branch_and_cut_t(const instance_t& inst,
                   const solver_config_t& cfg,
                   telemetry_sink_t* sink,
                   const std::string& run_id,
                   const solve_hooks_t& hooks)
    : inst_(inst),
      cfg_(cfg),
      sink_(sink),
      run_id_(run_id.empty() ? inst.name : run_id),
      hooks_(hooks),
      root_lp_(relax(inst)),
      sign_(inst.obj_sense == obj_sense_t::maximize ? -1.0 : 1.0),
      start_(std::chrono::steady_clock::now())
  {
    simplex_opts_.tol_feas       = cfg.tol_feas;
    simplex_opts_.max_iterations = cfg.max_lp_iterations;
    power_opts_.tolerance        = cfg.tol_pi;
    power_opts_.max_iterations   = cfg.max_pi;
    power_opts_.restart_seed ^= cfg.seed;
    cut_opts_.tol_int            = cfg.tol_int;
    cut_opts_.max_cuts_per_round = cfg.max_cuts_per_round;
  }

  solve_result_t run()
  {
    node_t root;
    root.id       = next_id_++;
    root.lower    = inst_.lower;
    root.upper    = inst_.upper;
    root.cuts     = std::make_shared<const std::vector<cut_row_t>>();
    root.lp_bound = -sign_ * inf;
    push(std::move(root));

    bool stopped = false;
    while (!open_.empty() && !unbounded_) {
      if (result_.nodes_processed >= cfg_.node_limit || elapsed() >= cfg_.time_limit) {
        stopped = true;
        break;
      }
      auto it     = open_.begin();
      node_t node = std::move(it->second);
      open_.erase(it);
      if (prunable(node.lp_bound)) { continue; }
      process(node);
    }

    result_.wall_time = elapsed();
    if (unbounded_) {
      result_.status = solve_status_t::unbounded;
    } else if (stopped) {
      result_.status = solve_status_t::limit;
    } else {
      result_.status = result_.incumbent ? solve_status_t::optimal : solve_status_t::infeasible;
    }
    if (result_.incumbent && !open_.empty() && stopped) {
      const double best_open = open_.begin()->first.first;
      const double inc       = sign_ * *result_.objective;
      result_.gap = std::max(0.0, (inc - best_open) / std::max(1.0, std::abs(inc)));
    }
    return std::move(result_);
  }

 private:
  struct lp_run_t {
    lp_solution_t sol;
    condition_estimate_t kappa;
    int first_iteration{0};
  };

  double elapsed() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  double stamp() const { return cfg_.record_wall_time ? elapsed() : 0.0; }

  // Minimization-form key of an instance-sense objective.
  double key(double z) const { return sign_ * z; }

  bool prunable(double bound) const
  {
    if (!result_.objective) { return false; }
    const double inc = key(*result_.objective);
    return key(bound) >= inc - 1e-6 * std::max(1.0, std::abs(inc));
  }

  void push(node_t node)
  {
    const double k = key(node.lp_bound);
    const int id   = node.id;
    open_.emplace(std::make_pair(k, id), std::move(node));
  }

  bool cuts_enabled(const node_t& node) const
  {
    switch (cfg_.cuts_mode) {
      case cuts_mode_t::off: return false;
      case cuts_mode_t::root_only: return node.depth == 0;
      case cuts_mode_t::everywhere: return true;
    }
    return false;
  }

  bool integral(const std::vector<double>& x) const
  {
    for (int j = 0; j < inst_.num_cols(); ++j) {
      if (!inst_.is_integer[j]) { continue; }
      if (std::abs(x[j] - std::round(x[j])) > cfg_.tol_int) { return false; }
    }
    return true;
  }

  lp_relaxation_t build_lp(const node_t& node) const
  {
    lp_relaxation_t lp = root_lp_;
    lp.lower           = node.lower;
    lp.upper           = node.upper;
    for (const auto& c : *node.cuts) {
      lp.append_row(c.coeffs, c.rhs, inf, row_provenance_t{row_origin_t::cut, c.round, c.index});
    }
    return lp;
  }

  telemetry_event_t event(event_kind_t kind, const node_t& node) const
  {
    telemetry_event_t ev;
    ev.kind      = kind;
    ev.run_id    = run_id_;
    ev.node_id   = node.id;
    ev.depth     = node.depth;
    ev.wall_time = stamp();
    return ev;
  }

  void emit(const telemetry_event_t& ev)
  {
    if (sink_) { sink_->record(ev); }
  }

  void emit_iteration(const node_t& node, int iteration, const condition_estimate_t& k, double z)
  {
    auto ev      = event(event_kind_t::simplex_iteration, node);
    ev.iteration = iteration;
    ev.kappa     = k.kappa;
    ev.sigma_max = k.sigma_max;
    ev.sigma_min = k.sigma_min;
    ev.converged = k.converged;
    ev.objective = z;
    emit(ev);
  }

  lp_run_t solve_lp(const node_t& node, const lp_relaxation_t& lp, const basis_t& start)
  {
    lp_run_t out;
    out.first_iteration = iteration_offset_;
    iteration_observer_t observer;
    if (cfg_.kappa_every_iteration) {
      observer = [&](const iteration_info_t& info) {
        const auto k = basis_condition(info.lp, info.basis.columns, info.factors, power_opts_);
        emit_iteration(node, out.first_iteration + info.iteration, k, info.objective);
      };
    }
    out.sol = solve_primal(lp, start, simplex_opts_, observer);
    if (out.sol.factors) {
      out.kappa = basis_condition(lp, out.sol.basis.columns, *out.sol.factors, power_opts_);
      if (!cfg_.kappa_every_iteration) {
        emit_iteration(node, out.first_iteration + out.sol.iterations, out.kappa,
                       out.sol.objective);
      }
    } else {
      out.kappa.kappa = std::numeric_limits<double>::quiet_NaN();
    }
    iteration_offset_ = out.first_iteration + out.sol.iterations + 1;
    result_.lp_iterations += out.sol.iterations;
    return out;
  }

  static bool failed(const lp_solution_t& sol)
  {
    return sol.status == lp_status_t::iteration_limit ||
           sol.status == lp_status_t::numerical_failure;
  }

  lp_run_t solve_with_retry(const node_t& node, const lp_relaxation_t& lp, const basis_t& start)
  {
    auto run = solve_lp(node, lp, start);
    if (failed(run.sol)) { run = solve_lp(node, lp, slack_basis(lp)); }
    return run;
  }

  void finish_node(node_t& node, node_status_t status, const lp_run_t* run, const char* lp_state)
  {
    node.status = status;
    auto ev     = event(event_kind_t::node_solved, node);
    ev.status   = lp_state;
    if (run) {
      ev.iteration = run->first_iteration + run->sol.iterations;
      if (std::isfinite(run->kappa.kappa)) {
        ev.kappa     = run->kappa.kappa;
        ev.sigma_max = run->kappa.sigma_max;
        ev.sigma_min = run->kappa.sigma_min;
        ev.converged = run->kappa.converged;
      }
      if (run->sol.status == lp_status_t::optimal) { ev.objective = run->sol.objective; }
    }
    emit(ev);
    ++result_.nodes_processed;
    if (status == node_status_t::branched) {
      ++result_.nodes_branched;
    } else {
      ++result_.nodes_fathomed;
    }
    result_.max_depth = std::max(result_.max_depth, node.depth);
    result_.nodes.push_back(node_record_t{node.id, node.parent, node.depth, node.lp_bound, status});
  }

  void update_incumbent(const std::vector<double>& x)
  {
    std::vector<double> xi = x;
    for (int j = 0; j < inst_.num_cols(); ++j) {
      if (inst_.is_integer[j]) { xi[j] = std::round(xi[j]); }
    }
    double z = inst_.objective_offset;
    for (int j = 0; j < inst_.num_cols(); ++j) {
      z += inst_.objective[j] * xi[j];
    }
    if (!result_.objective || key(z) < key(*result_.objective) - 1e-12) {
      result_.objective = z;
      result_.incumbent = std::move(xi);
    }
  }

  void process(node_t& node)
  {
    iteration_offset_  = 0;
    lp_relaxation_t lp = build_lp(node);
    auto run           = solve_with_retry(node, lp, node.warm_basis);

    if (failed(run.sol)) {
      ++result_.numerical_failures;
      finish_node(node, node_status_t::fathomed_infeasible, &run, to_string(run.sol.status));
      return;
    }
    if (run.sol.status == lp_status_t::unbounded) {
      unbounded_ = true;
      finish_node(node, node_status_t::fathomed_bound, &run, "unbounded");
      return;
    }
    if (node.parent && node.parent_kappa && run.sol.status == lp_status_t::optimal) {
      auto ev         = event(event_kind_t::node_branched, node);
      ev.iteration    = run.first_iteration + run.sol.iterations;
      ev.parent       = node.parent;
      ev.branch_var   = node.branch_var;
      ev.kappa_before = node.parent_kappa->kappa;
      ev.kappa_after  = run.kappa.kappa;
      ev.converged    = node.parent_kappa->converged && run.kappa.converged;
      ev.objective    = run.sol.objective;
      emit(ev);
    }
    if (run.sol.status == lp_status_t::infeasible) {
      finish_node(node, node_status_t::fathomed_infeasible, &run, "infeasible");
      return;
    }
    node.lp_bound = run.sol.objective;
    if (prunable(node.lp_bound)) {
      finish_node(node, node_status_t::fathomed_bound, &run, "optimal");
      return;
    }

    if (cuts_enabled(node)) {
      const int limit = node.depth == 0 ? cfg_.root_round_limit : cfg_.node_round_limit;
      auto own_cuts   = *node.cuts;
      std::vector<cut_candidate_t> accepted_here;
      for (int round = 1; round <= limit; ++round) {
        if (integral(run.sol.x)) { break; }
        auto candidates = generate_gomory(lp, run.sol, round, cut_opts_);
        auto accepted   = score_and_filter(candidates, accepted_here, cut_opts_);
        if (hooks_.on_cuts) { hooks_.on_cuts(node, lp, run.sol.x, candidates); }
        if (accepted.empty()) { break; }

        lp_relaxation_t cut_lp = lp;
        basis_t warm           = run.sol.basis;
        apply_cuts(cut_lp, warm, accepted, round);
        auto next = solve_with_retry(node, cut_lp, warm);
        if (failed(next.sol)) {
          // Keep the pre-round relaxation and stop separating here.
          ++result_.numerical_failures;
          break;
        }

        auto ev         = event(event_kind_t::cut_round_applied, node);
        ev.iteration    = next.first_iteration;
        ev.round        = round;
        ev.cuts_added   = static_cast<int>(accepted.size());
        ev.kappa_before = run.kappa.kappa;
        ev.kappa_after  = next.kappa.kappa;
        ev.converged    = run.kappa.converged && next.kappa.converged;
        if (next.sol.status == lp_status_t::optimal) { ev.objective = next.sol.objective; }
        emit(ev);

        ++result_.cut_rounds;
        result_.cuts_added += static_cast<int>(accepted.size());
        for (std::size_t k = 0; k < accepted.size(); ++k) {
          own_cuts.push_back(
            cut_row_t{accepted[k].coeffs, accepted[k].rhs, round, static_cast<int>(k)});
          accepted_here.push_back(std::move(accepted[k]));
        }
        const double z_old = run.sol.objective;
        lp                 = std::move(cut_lp);
        run                = std::move(next);

        if (run.sol.status == lp_status_t::infeasible) {
          finish_node(node, node_status_t::fathomed_infeasible, &run, "infeasible");
          return;
        }
        if (run.sol.status == lp_status_t::unbounded) {
          unbounded_ = true;
          finish_node(node, node_status_t::fathomed_bound, &run, "unbounded");
          return;
        }
        node.lp_bound = run.sol.objective;
        if (prunable(node.lp_bound)) {
          finish_node(node, node_status_t::fathomed_bound, &run, "optimal");
          return;
        }
        if (std::abs(run.sol.objective - z_old) < 1e-6 * std::max(1.0, std::abs(z_old))) {
          break;
        }
      }
      node.cuts = std::make_shared<const std::vector<cut_row_t>>(std::move(own_cuts));
    }

    if (integral(run.sol.x)) {
      update_incumbent(run.sol.x);
      finish_node(node, node_status_t::fathomed_integral, &run, "optimal");
      return;
    }

    const int var = select_branching_variable(run.sol.x, inst_.is_integer, cfg_.tol_int);
    node.warm_basis   = run.sol.basis;
    node.parent_kappa = run.kappa;
    auto [down, up]   = branch(node, var, run.sol.x[var], next_id_);
    next_id_ += 2;
    finish_node(node, node_status_t::branched, &run, "optimal");
    push(std::move(down));
    push(std::move(up));
  }

  const instance_t& inst_;
  const solver_config_t& cfg_;
  telemetry_sink_t* sink_;
  std::string run_id_;
  const solve_hooks_t& hooks_;
  lp_relaxation_t root_lp_;
  double sign_;
  std::chrono::steady_clock::time_point start_;
  simplex_options_t simplex_opts_;
  power_options_t power_opts_;
  cut_options_t cut_opts_;
  std::map<std::pair<double, int>, node_t> open_;
  solve_result_t result_;
  int next_id_{0};
  int iteration_offset_{0};
  bool unbounded_{false};
};

}  // namespace

solve_result_t solve(const instance_t& inst,
                     const solver_config_t& cfg,
                     telemetry_sink_t* sink,
                     const std::string& run_id,
                     const solve_hooks_t& hooks)
{
  branch_and_cut_t bc(inst, cfg, sink, run_id, hooks);
  return bc.run();
}

}  // namespace kscope
