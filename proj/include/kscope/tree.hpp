/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/conditioning.hpp>
#include <kscope/cuts.hpp>
#include <kscope/model.hpp>
#include <kscope/simplex.hpp>
#include <kscope/telemetry.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kscope {

enum class cuts_mode_t : std::uint8_t { off, root_only, everywhere };

const char* to_string(cuts_mode_t m);
std::optional<cuts_mode_t> parse_cuts_mode(const std::string& s);

/// Solver knobs. Limits default to one hour and 10,000 nodes; Gomory cuts
/// are separated at every node.
struct solver_config_t {
  int node_limit{10000};
  double time_limit{3600.0};
  cuts_mode_t cuts_mode{cuts_mode_t::everywhere};
  bool kappa_every_iteration{false};
  int max_cuts_per_round{10};
  int root_round_limit{8};
  int node_round_limit{2};
  double tol_feas{1e-7};
  double tol_int{1e-6};
  double tol_pi{1e-10};
  int max_pi{10000};
  std::uint64_t seed{0};
  bool record_wall_time{false};
  int max_lp_iterations{50000};
};

enum class node_status_t : std::uint8_t {
  open,
  branched,
  fathomed_bound,
  fathomed_infeasible,
  fathomed_integral,
};

const char* to_string(node_status_t s);

/// Cut row carried by a node and inherited by its descendants.
struct cut_row_t {
  sparse_vector_t coeffs;
  double rhs{0.0};
  int round{0};
  int index{0};
};

struct node_t {
  int id{0};
  int depth{0};
  std::optional<int> parent;
  std::vector<double> lower;
  std::vector<double> upper;
  std::shared_ptr<const std::vector<cut_row_t>> cuts;
  double lp_bound{0.0};  // instance sense
  node_status_t status{node_status_t::open};
  basis_t warm_basis;
  std::optional<condition_estimate_t> parent_kappa;
  std::optional<int> branch_var;
};

class no_fractional_error : public std::runtime_error {
 public:
  no_fractional_error() : std::runtime_error("NoFractional: every integer variable is integral") {}
};

class empty_tree_error : public std::runtime_error {
 public:
  empty_tree_error() : std::runtime_error("EmptyTree: no open nodes") {}
};

/// Most fractional integer variable (fractional part closest to 0.5), ties
/// to the smallest index.
int select_branching_variable(std::span<const double> x,
                              const std::vector<bool>& is_integer,
                              double tol_int = 1e-6);

/// Down child gets `upper[var] = floor(value)`, up child `lower[var] =
/// ceil(value)`. Children take ids `next_id` and `next_id + 1`.
std::pair<node_t, node_t> branch(const node_t& parent, int var, double value, int next_id);

/// Index of the open node with the most promising bound under `sense`, ties
/// to the lowest id.
std::size_t select_next_node(std::span<const node_t> open, obj_sense_t sense);

enum class solve_status_t : std::uint8_t { optimal, limit, infeasible, unbounded };

const char* to_string(solve_status_t s);

struct node_record_t {
  int id{0};
  std::optional<int> parent;
  int depth{0};
  double lp_bound{0.0};
  node_status_t status{node_status_t::open};
};

struct solve_result_t {
  solve_status_t status{solve_status_t::infeasible};
  std::optional<std::vector<double>> incumbent;
  std::optional<double> objective;
  int nodes_processed{0};
  int nodes_branched{0};
  int nodes_fathomed{0};
  int cut_rounds{0};
  int cuts_added{0};
  long lp_iterations{0};
  int numerical_failures{0};
  int max_depth{0};
  double wall_time{0.0};
  double gap{0.0};
  std::vector<node_record_t> nodes;
};

/// Optional callbacks for inspecting the search from tests and tools.
struct solve_hooks_t {
  /// Every cut round: node, its local bounds, the LP point being separated
  /// and all generated candidates with their verdicts.
  std::function<void(const node_t&,
                     const lp_relaxation_t&,
                     const std::vector<double>&,
                     const std::vector<cut_candidate_t>&)>
    on_cuts;
};

/// Branch-and-cut with best-bound node selection and most-fractional
/// branching. Emits SimplexIteration, NodeBranched, CutRoundApplied and
/// NodeSolved events to `sink` when given.
solve_result_t solve(const instance_t& inst,
                     const solver_config_t& cfg,
                     telemetry_sink_t* sink      = nullptr,
                     const std::string& run_id   = {},
                     const solve_hooks_t& hooks  = {});

/// kappa of the basis matrix named by `columns` in `lp`, reusing `lu`.
condition_estimate_t basis_condition(const lp_relaxation_t& lp,
                                     const std::vector<int>& columns,
                                     const lu_factors_t& lu,
                                     const power_options_t& opts = {});

}  // namespace kscope
