/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <kscope/simplex.hpp>

#include "oracles.hpp"

using namespace kscope;

namespace {

lp_relaxation_t lp_from(std::initializer_list<std::pair<std::vector<double>, std::pair<double, double>>> rows,
                        std::vector<double> c,
                        obj_sense_t sense,
                        std::vector<double> lo,
                        std::vector<double> up)
{
  lp_relaxation_t lp;
  lp.objective = std::move(c);
  lp.obj_sense = sense;
  lp.lower     = std::move(lo);
  lp.upper     = std::move(up);
  lp.is_integer.assign(lp.objective.size(), false);
  for (const auto& [coefs, bounds] : rows) {
    sparse_vector_t r;
    for (std::size_t j = 0; j < coefs.size(); ++j) {
      if (coefs[j] != 0.0) { r.push_back(static_cast<int>(j), coefs[j]); }
    }
    lp.append_row(r, bounds.first, bounds.second, {});
  }
  return lp;
}

void check_optimality(const lp_relaxation_t& lp, const lp_solution_t& sol)
{
  const double tol = 1e-7;
  for (int j = 0; j < lp.num_cols(); ++j) {
    CHECK(sol.x[j] >= lp.lower[j] - tol * std::max(1.0, std::abs(lp.lower[j])));
    CHECK(sol.x[j] <= lp.upper[j] + tol * std::max(1.0, std::abs(lp.upper[j])));
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double ax = lp.rows[i].dot(sol.x);
    CHECK(ax >= lp.row_lower[i] - tol * std::max(1.0, std::abs(lp.row_lower[i])));
    CHECK(ax <= lp.row_upper[i] + tol * std::max(1.0, std::abs(lp.row_upper[i])));
  }
  // Reduced costs in minimization form: d_j = sign c_j - a_j^T y_min.
  const double sign = lp.obj_sense == obj_sense_t::maximize ? -1.0 : 1.0;
  std::vector<double> d(lp.num_cols());
  for (int j = 0; j < lp.num_cols(); ++j) d[j] = sign * lp.objective[j];
  for (int i = 0; i < lp.num_rows(); ++i) {
    for (std::size_t k = 0; k < lp.rows[i].size(); ++k) {
      d[lp.rows[i].index[k]] -= lp.rows[i].value[k] * sign * sol.y[i];
    }
  }
  const double topt = 1e-7;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const auto st = sol.basis.status[j];
    if (st == var_status_t::basic) {
      CHECK(std::abs(d[j]) <= topt);
    } else if (st == var_status_t::at_lower && lp.lower[j] != lp.upper[j]) {
      CHECK(d[j] >= -topt);
    } else if (st == var_status_t::at_upper && lp.lower[j] != lp.upper[j]) {
      CHECK(d[j] <= topt);
    }
  }
}

}  // namespace

TEST_CASE("textbook maximization")
{
  const auto lp = lp_from({{{1, 0}, {-inf, 4}}, {{0, 2}, {-inf, 12}}, {{3, 2}, {-inf, 18}}},
                          {3, 5}, obj_sense_t::maximize, {0, 0}, {inf, inf});
  const auto sol = solve_primal(lp);
  REQUIRE(sol.status == lp_status_t::optimal);
  CHECK(sol.objective == doctest::Approx(36.0));
  CHECK(sol.x[0] == doctest::Approx(2.0));
  CHECK(sol.x[1] == doctest::Approx(6.0));
  const auto ref = oracle::vertex_enumeration(
    lp_from({{{1, 0}, {-inf, 4}}, {{0, 2}, {-inf, 12}}, {{3, 2}, {-inf, 18}}}, {3, 5},
            obj_sense_t::maximize, {0, 0}, {100, 100}));
  CHECK(ref.objective == doctest::Approx(sol.objective));
  check_optimality(lp, sol);
}

TEST_CASE("x >= 1 and x <= 0 is infeasible")
{
  const auto lp = lp_from({{{1}, {1, inf}}, {{1}, {-inf, 0}}}, {1}, obj_sense_t::minimize, {-inf},
                          {inf});
  CHECK(solve_primal(lp).status == lp_status_t::infeasible);
}

TEST_CASE("max x with no upper limit is unbounded")
{
  const auto lp = lp_from({{{1, -1}, {-inf, 2}}}, {1, 0}, obj_sense_t::maximize, {0, 0},
                          {inf, inf});
  CHECK(solve_primal(lp).status == lp_status_t::unbounded);
}

TEST_CASE("vertex enumeration equivalence on seeded bounded LPs")
{
  int optimal = 0, infeasible = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto lp  = oracle::random_bounded_lp(seed);
    const auto ref = oracle::vertex_enumeration(lp);
    const auto sol = solve_primal(lp);
    CAPTURE(seed);
    if (ref.feasible) {
      ++optimal;
      REQUIRE(sol.status == lp_status_t::optimal);
      CHECK(std::abs(sol.objective - ref.objective) <= 1e-6 * std::max(1.0, std::abs(ref.objective)));
      check_optimality(lp, sol);
    } else {
      ++infeasible;
      CHECK(sol.status == lp_status_t::infeasible);
    }
  }
  CHECK(optimal > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("observer starts at the slack basis and the objective never worsens in phase 2")
{
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto lp     = oracle::random_bounded_lp(seed);
    const double sign = lp.obj_sense == obj_sense_t::maximize ? -1.0 : 1.0;
    std::vector<std::pair<int, double>> trace;
    int first = -1;
    const auto sol = solve_primal(lp, slack_basis(lp), {}, [&](const iteration_info_t& info) {
      if (first < 0) { first = info.iteration; }
      if (info.phase == 2) { trace.emplace_back(info.iteration, sign * info.objective); }
    });
    CAPTURE(seed);
    CHECK(first == 0);
    for (std::size_t k = 1; k < trace.size(); ++k) {
      CHECK(trace[k].second <= trace[k - 1].second + 1e-9 * std::max(1.0, std::abs(trace[k - 1].second)));
    }
    if (sol.status == lp_status_t::optimal && !trace.empty()) {
      CHECK(trace.back().second == doctest::Approx(sign * sol.objective));
    }
  }
}

TEST_CASE("warm restart after appending rows in two batches")
{
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto full = oracle::random_bounded_lp(seed);
    if (full.num_rows() < 2) { continue; }
    const int half = full.num_rows() / 2;
    lp_relaxation_t part = full;
    part.rows.resize(half);
    part.row_lower.resize(half);
    part.row_upper.resize(half);
    part.provenance.resize(half);
    const auto first = solve_primal(part);
    if (first.status != lp_status_t::optimal) { continue; }
    const auto cold = solve_primal(full);
    const auto warm = solve_primal(full, first.basis);
    CAPTURE(seed);
    CHECK(warm.status == cold.status);
    if (cold.status == lp_status_t::optimal) {
      CHECK(std::abs(warm.objective - cold.objective) <= 1e-9 * std::max(1.0, std::abs(cold.objective)));
    }
  }
}

TEST_CASE("iteration cap")
{
  const auto lp = lp_from({{{1, 0}, {-inf, 4}}, {{0, 2}, {-inf, 12}}, {{3, 2}, {-inf, 18}}},
                          {3, 5}, obj_sense_t::maximize, {0, 0}, {inf, inf});
  simplex_options_t opts;
  opts.max_iterations = 1;
  CHECK(solve_primal(lp, opts).status == lp_status_t::iteration_limit);
}
