/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <kscope/cuts.hpp>
#include <kscope/simplex.hpp>
#include <kscope/tree.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace kscope;

namespace {

cut_candidate_t candidate(std::vector<double> dense, double efficacy, int source)
{
  cut_candidate_t c;
  for (std::size_t j = 0; j < dense.size(); ++j) {
    if (dense[j] != 0.0) { c.coeffs.push_back(static_cast<int>(j), dense[j]); }
  }
  c.rhs        = 1.0;
  c.efficacy   = efficacy;
  c.source_var = source;
  return c;
}

}  // namespace

TEST_CASE("GMI coefficient hand examples")
{
  // integer nonbasic, a = 0.25, f0 = 0.5: min(0.25/0.5, 0.75/0.5)
  CHECK(gmi_coefficient(0.25, 0.5, true) == doctest::Approx(0.5));
  // continuous nonbasic, a = 0.3, f0 = 0.5
  CHECK(gmi_coefficient(0.3, 0.5, false) == doctest::Approx(0.6));
  CHECK(gmi_coefficient(-0.3, 0.5, false) == doctest::Approx(0.6));
  CHECK(gmi_coefficient(1.0, 0.5, true) == doctest::Approx(0.0));
  CHECK(gmi_coefficient(0.9, 0.2, true) == doctest::Approx(std::min(0.9 / 0.2, 0.1 / 0.8)));
}

TEST_CASE("cut 0.5 x >= 1 from a single fractional row is valid on the lattice")
{
  // max x0 s.t. x0 - 0.25 x1... built as: x0 + 0.25 x1 = 3.5 has no integer
  // solutions with x1 = 0, the derived cut forces x1 >= 2.
  instance_t inst;
  inst.name       = "one";
  inst.col_names  = {"x0", "x1"};
  inst.objective  = {0.0, 1.0};
  inst.lower      = {0.0, 0.0};
  inst.upper      = {10.0, 10.0};
  inst.is_integer = {true, true};
  inst.row_names  = {"r"};
  inst.rows.resize(1);
  inst.rows[0].push_back(0, 4.0);
  inst.rows[0].push_back(1, 1.0);
  inst.senses = {row_sense_t::equal};
  inst.rhs    = {14.0};
  inst.ranges = {std::nullopt};
  const auto lp  = relax(inst);
  const auto sol = solve_primal(lp);
  REQUIRE(sol.status == lp_status_t::optimal);
  const auto cuts = generate_gomory(lp, sol, 1);
  REQUIRE_FALSE(cuts.empty());
  const auto points = oracle::feasible_points(inst);
  REQUIRE_FALSE(points.empty());
  for (const auto& c : cuts) {
    CHECK(c.violation(sol.x) > 0.0);
    CHECK(c.efficacy > 0.0);
    for (const auto& p : points) {
      CHECK(c.coeffs.dot(p) >= c.rhs - 1e-7);
    }
  }
}

TEST_CASE("integral LP optimum yields no cuts")
{
  instance_t inst;
  inst.name       = "int";
  inst.col_names  = {"x"};
  inst.objective  = {1.0};
  inst.obj_sense  = obj_sense_t::maximize;
  inst.lower      = {0.0};
  inst.upper      = {inf};
  inst.is_integer = {true};
  inst.row_names  = {"r"};
  inst.rows.resize(1);
  inst.rows[0].push_back(0, 1.0);
  inst.senses = {row_sense_t::less_equal};
  inst.rhs    = {3.0};
  inst.ranges = {std::nullopt};
  const auto lp  = relax(inst);
  const auto sol = solve_primal(lp);
  CHECK(generate_gomory(lp, sol, 1).empty());
}

TEST_CASE("filter verdicts")
{
  SUBCASE("dynamism")
  {
    std::vector<cut_candidate_t> c{candidate({1.0, 1e7}, 1.0, 0)};
    CHECK(score_and_filter(c, {}).empty());
    CHECK(c[0].verdict == cut_verdict_t::rejected_dynamism);
  }
  SUBCASE("parallel duplicates")
  {
    std::vector<cut_candidate_t> c{candidate({1.0, 2.0}, 0.5, 0), candidate({1.0, 2.0}, 0.5, 1)};
    const auto acc = score_and_filter(c, {});
    CHECK(acc.size() == 1);
    CHECK(c[0].verdict == cut_verdict_t::accepted);
    CHECK(c[1].verdict == cut_verdict_t::rejected_parallel);
    CHECK(c[1].parallelism_max == doctest::Approx(1.0));
  }
  SUBCASE("weak")
  {
    std::vector<cut_candidate_t> c{candidate({1.0}, 1e-9, 0)};
    CHECK(score_and_filter(c, {}).empty());
    CHECK(c[0].verdict == cut_verdict_t::rejected_weak);
  }
  SUBCASE("per-round limit")
  {
    std::vector<cut_candidate_t> c;
    for (int k = 0; k < 12; ++k) {
      std::vector<double> d(12, 0.0);
      d[k] = 1.0;
      c.push_back(candidate(d, 1.0 - 0.01 * k, k));
    }
    const auto acc = score_and_filter(c, {});
    CHECK(acc.size() == 10);
    CHECK(c[10].verdict == cut_verdict_t::rejected_limit);
    CHECK(c[11].verdict == cut_verdict_t::rejected_limit);
  }
  SUBCASE("parallel to a cut accepted earlier at the node")
  {
    std::vector<cut_candidate_t> prev{candidate({2.0, 4.0}, 1.0, 5)};
    std::vector<cut_candidate_t> c{candidate({1.0, 2.0}, 0.5, 0)};
    CHECK(score_and_filter(c, prev).empty());
    CHECK(c[0].verdict == cut_verdict_t::rejected_parallel);
  }
}

TEST_CASE("accepted set does not depend on candidate order")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cut_candidate_t> c;
    for (int k = 0; k < 15; ++k) {
      std::vector<double> d(4);
      for (auto& v : d) v = std::round(u(rng) * 3.0);
      if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) d[0] = 1.0;
      c.push_back(candidate(d, std::round(std::abs(u(rng)) * 4.0) / 4.0, k));
    }
    auto shuffled = c;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = score_and_filter(c, {});
    const auto b = score_and_filter(shuffled, {});
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].source_var == b[k].source_var);
    }
  }
}

TEST_CASE("apply_cuts grows rows and basis by the number of cuts")
{
  auto lp        = relax(oracle::random_milp(2));
  const auto sol = solve_primal(lp);
  REQUIRE(sol.status == lp_status_t::optimal);
  auto basis     = sol.basis;
  const int m0   = lp.num_rows();
  {
    auto same = lp;
    auto b    = basis;
    apply_cuts(same, b, {}, 1);
    CHECK(same.num_rows() == m0);
    CHECK(b.num_rows() == m0);
  }
  std::vector<cut_candidate_t> three{candidate({1.0}, 1.0, 0), candidate({0.0, 1.0}, 1.0, 1),
                                     candidate({1.0, 1.0}, 1.0, 2)};
  apply_cuts(lp, basis, three, 1);
  CHECK(lp.num_rows() == m0 + 3);
  CHECK(basis.num_rows() == m0 + 3);
  CHECK(lp.provenance.back().origin == row_origin_t::cut);
  CHECK(lp.provenance.back().index == 2);
  const auto warm = solve_primal(lp, basis);
  CHECK(warm.status != lp_status_t::numerical_failure);
}

TEST_CASE("generated cuts are valid within local bounds and separate the LP point")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = oracle::random_milp(seed, seed % 4 == 3);
    solver_config_t cfg;
    cfg.cuts_mode = cuts_mode_t::everywhere;
    int checked   = 0;
    solve_hooks_t hooks;
    hooks.on_cuts = [&](const node_t& node, const lp_relaxation_t&, const std::vector<double>& x,
                        const std::vector<cut_candidate_t>& cands) {
      const auto points = oracle::feasible_points(inst, node.lower, node.upper);
      for (const auto& c : cands) {
        ++checked;
        CHECK(c.efficacy > 0.0);
        CHECK(c.violation(x) > 0.0);
        for (const auto& p : points) {
          CHECK(c.coeffs.dot(p) >= c.rhs - 1e-6 * std::max(1.0, std::abs(c.rhs)));
        }
      }
    };
    CAPTURE(seed);
    solve(inst, cfg, nullptr, {}, hooks);
  }
}
