/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <kscope/analysis.hpp>
#include <kscope/generator.hpp>
#include <kscope/tree.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace kscope;

namespace {

telemetry_event_t iteration(int node, int depth, int it, double kappa, double z = 0.0)
{
  telemetry_event_t ev;
  ev.kind      = event_kind_t::simplex_iteration;
  ev.node_id   = node;
  ev.depth     = depth;
  ev.iteration = it;
  ev.kappa     = kappa;
  ev.sigma_max = kappa;
  ev.sigma_min = 1.0;
  ev.objective = z;
  ev.converged = true;
  return ev;
}

telemetry_event_t delta(event_kind_t kind, double before, double after, int depth = 1, int it = 0)
{
  telemetry_event_t ev;
  ev.kind         = kind;
  ev.depth        = depth;
  ev.iteration    = it;
  ev.kappa_before = before;
  ev.kappa_after  = after;
  ev.converged    = true;
  if (kind == event_kind_t::cut_round_applied) {
    ev.round      = 1;
    ev.cuts_added = 1;
  } else {
    ev.parent = 0;
  }
  return ev;
}

telemetry_event_t solved(int depth, double log10_kappa)
{
  telemetry_event_t ev;
  ev.kind      = event_kind_t::node_solved;
  ev.depth     = depth;
  ev.kappa     = std::pow(10.0, log10_kappa);
  ev.converged = true;
  ev.status    = "optimal";
  return ev;
}

// Closed-form simple linear regression.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y)
{
  const double n  = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("root series from a cold solve starts at log10 kappa 0")
{
  memory_sink_t sink;
  solver_config_t cfg;
  cfg.kappa_every_iteration = true;
  solve(generate(family_t::knapsack, 4), cfg, &sink, "k");
  const auto s = root_series(sink.events());
  REQUIRE_FALSE(s.points.empty());
  CHECK(s.points.front().iteration == 0);
  CHECK(s.points.front().log10_kappa == 0.0);
  CHECK(std::is_sorted(s.round_boundaries.begin(), s.round_boundaries.end()));
  for (int b : s.round_boundaries) {
    CHECK(b <= s.points.back().iteration);
  }
}

TEST_CASE("root series boundaries and errors")
{
  std::vector<telemetry_event_t> ev{iteration(0, 0, 0, 1.0), iteration(0, 0, 3, 10.0),
                                    delta(event_kind_t::cut_round_applied, 10, 20, 0, 4),
                                    iteration(0, 0, 4, 20.0),
                                    delta(event_kind_t::cut_round_applied, 20, 30, 0, 6),
                                    iteration(0, 0, 6, 30.0)};
  const auto s = root_series(ev);
  CHECK(s.round_boundaries == std::vector<int>{4, 6});
  CHECK(s.points.size() == 4);
  std::vector<telemetry_event_t> deep{iteration(3, 2, 0, 5.0)};
  CHECK_THROWS_AS(root_series(deep), no_root_events_error);
}

TEST_CASE("root delta summary")
{
  SUBCASE("no cuts")
  {
    std::vector<telemetry_event_t> ev{iteration(0, 0, 0, 1.0), iteration(0, 0, 5, 40.0)};
    const auto r = root_delta_summary(ev);
    CHECK(r.kappa_original == 40.0);
    CHECK_FALSE(r.kappa_mean_cutting);
    CHECK_FALSE(r.kappa_final);
    CHECK_FALSE(r.signed_log_change());
  }
  SUBCASE("geometric mean of the cutting phase")
  {
    std::vector<telemetry_event_t> ev{iteration(0, 0, 2, 50.0),
                                      delta(event_kind_t::cut_round_applied, 50, 1e4, 0, 3),
                                      iteration(0, 0, 3, 1e2), iteration(0, 0, 4, 1e4)};
    const auto r = root_delta_summary(ev);
    CHECK(r.kappa_original == 50.0);
    CHECK(*r.kappa_mean_cutting == doctest::Approx(1e3));
    CHECK(*r.kappa_final == 1e4);
    CHECK(*r.kappa_mean_cutting >= 1e2);
    CHECK(*r.kappa_mean_cutting <= 1e4);
    const auto a = root_delta_summary(ev, mean_kind_t::arithmetic);
    CHECK(*a.kappa_mean_cutting == doctest::Approx(5050.0));
  }
  SUBCASE("improvement gives a negative signed change")
  {
    std::vector<telemetry_event_t> ev{iteration(0, 0, 2, 500.0),
                                      delta(event_kind_t::cut_round_applied, 500, 50, 0, 3),
                                      iteration(0, 0, 3, 50.0)};
    CHECK(*root_delta_summary(ev).signed_log_change() < 0.0);
  }
  CHECK_THROWS_AS(root_delta_summary({}), no_root_events_error);
}

TEST_CASE("relative change")
{
  CHECK(relative_change(1e3, 1e4) == doctest::Approx(1.0));
  CHECK(relative_change(7.0, 7.0) == 0.0);
  CHECK(relative_change(1e3, 1e3) == 0.0);
  CHECK(relative_change(2.0, 3.0, change_kind_t::relative) == doctest::Approx(0.5));
}

TEST_CASE("node delta stats")
{
  std::vector<telemetry_event_t> ev{
    delta(event_kind_t::node_branched, 100, 100),
    delta(event_kind_t::node_branched, 100, 100 * std::pow(10.0, 0.1)),
    delta(event_kind_t::node_branched, 100, 100 * std::pow(10.0, -0.1)),
    delta(event_kind_t::cut_round_applied, 10, 1000)};
  auto unconverged      = delta(event_kind_t::cut_round_applied, 10, 1e9);
  unconverged.converged = false;
  ev.push_back(unconverged);
  const auto d = node_delta_stats(ev);
  CHECK(d.branch_count == 3);
  CHECK(d.cut_count == 1);
  CHECK(std::abs(*d.branch_mean) <= 1e-12);
  CHECK(*d.cut_mean == doctest::Approx(2.0));

  std::mt19937_64 rng(3);
  auto shuffled = ev;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto e = node_delta_stats(shuffled);
  CHECK(*e.branch_mean == doctest::Approx(*d.branch_mean).epsilon(1e-12));
  CHECK(*e.cut_mean == *d.cut_mean);

  CHECK_FALSE(node_delta_stats({}).branch_mean);
}

TEST_CASE("cross instance delta summary averages per instance")
{
  std::map<std::string, instance_deltas_t> m;
  m["a"] = instance_deltas_t{0.2, 1.0, 4, 2};
  m["b"] = instance_deltas_t{-0.2, std::nullopt, 1, 0};
  const auto s = summarize_deltas(m);
  CHECK(*s.branch_mean == doctest::Approx(0.0));
  CHECK(*s.cut_mean == 1.0);
  CHECK(s.branch_instances == 2);
  CHECK(s.cut_instances == 1);
}

TEST_CASE("depth regression")
{
  {
    std::vector<telemetry_event_t> ev{solved(0, 2), solved(1, 3), solved(2, 4)};
    CHECK(depth_regression(ev).slope == doctest::Approx(1.0));
  }
  {
    std::vector<telemetry_event_t> ev{solved(0, 2), solved(1, 2), solved(2, 2)};
    CHECK(std::abs(depth_regression(ev).slope) <= 1e-12);
  }
  {
    std::vector<telemetry_event_t> ev{solved(0, 1.0), solved(1, 1.4), solved(2, 2.1),
                                      solved(3, 2.2)};
    const double expected = ols_slope({0, 1, 2, 3}, {1.0, 1.4, 2.1, 2.2});
    const auto r          = depth_regression(ev);
    CHECK(r.slope == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.slope == doctest::Approx(0.43).epsilon(0.01));
  }
  {
    // per-depth means, not per node
    std::vector<telemetry_event_t> ev{solved(0, 0), solved(1, 1), solved(1, 1), solved(1, 1),
                                      solved(2, 2)};
    const auto r = depth_regression(ev);
    CHECK(r.counts == std::vector<int>{1, 3, 1});
    CHECK(r.slope == doctest::Approx(1.0));
  }
  {
    std::vector<telemetry_event_t> ev{solved(0, 3), solved(0, 4)};
    CHECK_THROWS_AS(depth_regression(ev), insufficient_depths_error);
  }
}

TEST_CASE("uniform kappa scaling leaves the slope unchanged")
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  std::vector<telemetry_event_t> ev;
  for (int k = 0; k < 30; ++k) ev.push_back(solved(k % 5, u(rng)));
  auto scaled = ev;
  for (auto& e : scaled) *e.kappa *= 1234.5;
  const auto a = depth_regression(ev);
  const auto b = depth_regression(scaled);
  CHECK(a.slope == doctest::Approx(b.slope).epsilon(1e-9));
  CHECK(b.intercept - a.intercept == doctest::Approx(std::log10(1234.5)).epsilon(1e-9));
}
