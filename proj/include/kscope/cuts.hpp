/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/model.hpp>
#include <kscope/simplex.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace kscope {

enum class cut_verdict_t : std::uint8_t {
  pending,
  accepted,
  rejected_dynamism,
  rejected_parallel,
  rejected_weak,
  rejected_limit,
};

const char* to_string(cut_verdict_t v);

/// Inequality `coeffs . x >= rhs` over the structural variables.
struct cut_candidate_t {
  sparse_vector_t coeffs;
  double rhs{0.0};
  int source_var{-1};  // basic variable whose tableau row produced the cut
  int round{0};
  double efficacy{0.0};
  double parallelism_max{0.0};
  double dynamism{1.0};
  cut_verdict_t verdict{cut_verdict_t::pending};

  double violation(const std::vector<double>& x) const { return rhs - coeffs.dot(x); }
};

struct cut_options_t {
  double tol_int{1e-6};
  double coef_drop{1e-10};
  double max_dynamism{1e6};
  double max_parallelism{0.99};
  double min_efficacy{1e-4};
  int max_cuts_per_round{10};
};

/// Coefficient of a nonbasic variable in the Gomory mixed-integer cut
/// `sum gamma_j t_j >= 1` derived from a tableau row with fractional
/// right-hand side part `f0`, where `t_j >= 0` is the complemented nonbasic.
double gmi_coefficient(double row_coef, double f0, bool integer_var);

/// Gomory mixed-integer cuts from every integer basic variable whose value is
/// fractional beyond `tol_int`. Rows touching a free nonbasic are skipped.
/// Returns an empty list when no row qualifies.
std::vector<cut_candidate_t> generate_gomory(const lp_relaxation_t& lp,
                                             const lp_solution_t& sol,
                                             int round,
                                             const cut_options_t& opts = {});

/// Cosine of the angle between two cut normals.
double parallelism(const sparse_vector_t& a, const sparse_vector_t& b);

/// Max |coef| / min nonzero |coef|; 1 for an empty vector.
double dynamism(const sparse_vector_t& coeffs);

/// Sets a verdict on every candidate and returns the accepted ones in
/// descending efficacy order (ties by source variable). `accepted_so_far`
/// holds the cuts already accepted at the current node.
std::vector<cut_candidate_t> score_and_filter(std::vector<cut_candidate_t>& candidates,
                                              std::span<const cut_candidate_t> accepted_so_far,
                                              const cut_options_t& opts = {});

/// Appends the cuts as `>=` rows tagged cut(round, index) and makes each new
/// row's logical basic in `basis`.
void apply_cuts(lp_relaxation_t& lp,
                basis_t& basis,
                std::span<const cut_candidate_t> accepted,
                int round);

}  // namespace kscope
