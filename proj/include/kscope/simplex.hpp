/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/dense_matrix.hpp>
#include <kscope/lu_factors.hpp>
#include <kscope/model.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace kscope {

// Variables are numbered 0..n-1 for structurals and n..n+m-1 for the row
// logicals s_i defined by a_i x + s_i = 0, so s_i ranges over
// [-row_upper_i, -row_lower_i] and the all-logical basis is exactly I.

enum class var_status_t : std::uint8_t { basic, at_lower, at_upper, at_zero };

struct basis_t {
  std::vector<int> columns;            // basis position -> variable
  std::vector<var_status_t> status;    // per variable, size n+m

  int num_rows() const { return static_cast<int>(columns.size()); }
  bool empty() const { return columns.empty(); }
};

/// All-logical basis with structurals resting at a finite bound (lower
/// first), or at zero when free.
basis_t slack_basis(const lp_relaxation_t& lp);

/// Grows a basis for rows appended after it was taken: each new logical
/// becomes basic in a new trailing position.
void extend_basis(basis_t& basis, const lp_relaxation_t& lp);

/// Dense m x m matrix [A | I] restricted to the basic columns.
dense_matrix_t assemble_basis(const lp_relaxation_t& lp, const std::vector<int>& columns);

enum class lp_status_t : std::uint8_t {
  optimal,
  infeasible,
  unbounded,
  iteration_limit,
  numerical_failure,
};

const char* to_string(lp_status_t s);

struct simplex_options_t {
  double tol_feas{1e-7};
  double tol_opt{1e-9};
  double tol_pivot{1e-9};
  int max_iterations{50000};
  int refactor_interval{100};
  double residual_tolerance{1e-9};
  int bland_after_degenerate{50};
};

struct iteration_info_t {
  int iteration;  // 0 is the starting basis
  int phase;      // 1 while primal infeasible, 2 afterwards
  double objective;
  const lp_relaxation_t& lp;
  const basis_t& basis;
  const lu_factors_t& factors;
};

using iteration_observer_t = std::function<void(const iteration_info_t&)>;

struct lp_solution_t {
  lp_status_t status{lp_status_t::numerical_failure};
  std::vector<double> x;       // structural values
  std::vector<double> slacks;  // logical values s_i = -a_i x
  std::vector<double> y;       // row duals, instance sense
  double objective{0.0};       // instance sense, including the offset
  basis_t basis;
  std::shared_ptr<const lu_factors_t> factors;
  int iterations{0};
  int phase1_iterations{0};
};

/// Bounded-variable revised primal simplex.
///
/// Infeasible starting points go through a composite phase 1 that minimizes
/// the sum of bound violations of the basic variables. Pricing is Dantzig's
/// rule, switching to Bland's rule after `bland_after_degenerate`
/// consecutive degenerate pivots. The observer sees the start basis as
/// iteration 0 and is then called once after every pivot or bound flip.
lp_solution_t solve_primal(const lp_relaxation_t& lp,
                           const basis_t& start,
                           const simplex_options_t& opts             = {},
                           const iteration_observer_t& observer = {});

lp_solution_t solve_primal(const lp_relaxation_t& lp, const simplex_options_t& opts = {});

}  // namespace kscope
