/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/analysis.hpp>

#include <algorithm>
#include <cmath>

namespace kscope {

namespace {

bool usable_kappa(const std::optional<double>& k)
{
  return k && std::isfinite(*k) && *k > 0.0;
}

}  // namespace

root_series_t root_series(std::span<const telemetry_event_t> events)
{
  root_series_t out;
  for (const auto& ev : events) {
    if (ev.depth != 0) { continue; }
    if (ev.kind == event_kind_t::simplex_iteration && usable_kappa(ev.kappa)) {
      out.points.push_back(
        root_point_t{ev.iteration, std::log10(*ev.kappa), ev.objective.value_or(0.0), ev.converged});
    } else if (ev.kind == event_kind_t::cut_round_applied) {
      if (out.round_boundaries.empty() || ev.iteration > out.round_boundaries.back()) {
        out.round_boundaries.push_back(ev.iteration);
      }
    }
  }
  if (out.points.empty()) { throw no_root_events_error(); }
  return out;
}

std::optional<double> root_delta_t::signed_log_change() const
{
  if (!kappa_final) { return std::nullopt; }
  return std::log10(*kappa_final / kappa_original);
}

root_delta_t root_delta_summary(std::span<const telemetry_event_t> events, mean_kind_t mean)
{
  std::vector<const telemetry_event_t*> rounds;
  std::vector<const telemetry_event_t*> iterations;
  const telemetry_event_t* solved = nullptr;
  for (const auto& ev : events) {
    if (ev.depth != 0) { continue; }
    switch (ev.kind) {
      case event_kind_t::cut_round_applied: rounds.push_back(&ev); break;
      case event_kind_t::simplex_iteration:
        if (usable_kappa(ev.kappa)) { iterations.push_back(&ev); }
        break;
      case event_kind_t::node_solved: solved = &ev; break;
      default: break;
    }
  }
  if (iterations.empty()) { throw no_root_events_error(); }

  root_delta_t out;
  if (rounds.empty()) {
    out.kappa_original =
      solved && usable_kappa(solved->kappa) ? *solved->kappa : *iterations.back()->kappa;
    return out;
  }
  out.kappa_original = *rounds.front()->kappa_before;
  out.kappa_final    = *rounds.back()->kappa_after;

  const int first = rounds.front()->iteration;
  double sum      = 0.0;
  int count       = 0;
  for (const auto* ev : iterations) {
    if (ev->iteration < first) { continue; }
    sum += mean == mean_kind_t::geometric ? std::log10(*ev->kappa) : *ev->kappa;
    ++count;
  }
  if (count > 0) {
    out.kappa_mean_cutting = mean == mean_kind_t::geometric ? std::pow(10.0, sum / count)
                                                            : sum / count;
  }
  return out;
}

double relative_change(double before, double after, change_kind_t kind)
{
  if (kind == change_kind_t::log_ratio) { return std::log10(after / before); }
  return (after - before) / before;
}

instance_deltas_t node_delta_stats(std::span<const telemetry_event_t> events, change_kind_t kind)
{
  instance_deltas_t out;
  double branch_sum = 0.0;
  double cut_sum    = 0.0;
  for (const auto& ev : events) {
    const bool is_branch = ev.kind == event_kind_t::node_branched;
    const bool is_cut    = ev.kind == event_kind_t::cut_round_applied;
    if (!is_branch && !is_cut) { continue; }
    if (!ev.converged || !usable_kappa(ev.kappa_before) || !usable_kappa(ev.kappa_after)) {
      continue;
    }
    const double d = relative_change(*ev.kappa_before, *ev.kappa_after, kind);
    if (is_branch) {
      branch_sum += d;
      ++out.branch_count;
    } else {
      cut_sum += d;
      ++out.cut_count;
    }
  }
  if (out.branch_count > 0) { out.branch_mean = branch_sum / out.branch_count; }
  if (out.cut_count > 0) { out.cut_mean = cut_sum / out.cut_count; }
  return out;
}

delta_summary_t summarize_deltas(const std::map<std::string, instance_deltas_t>& per_instance)
{
  delta_summary_t out;
  out.per_instance  = per_instance;
  double branch_sum = 0.0;
  double cut_sum    = 0.0;
  for (const auto& [name, d] : per_instance) {
    if (d.branch_mean) {
      branch_sum += *d.branch_mean;
      ++out.branch_instances;
    }
    if (d.cut_mean) {
      cut_sum += *d.cut_mean;
      ++out.cut_instances;
    }
  }
  if (out.branch_instances > 0) { out.branch_mean = branch_sum / out.branch_instances; }
  if (out.cut_instances > 0) { out.cut_mean = cut_sum / out.cut_instances; }
  return out;
}

std::pair<double, double> least_squares(std::span<const double> x,
                                        std::span<const double> y,
                                        std::span<const double> w)
{
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    sw += wi;
    sx += wi * x[i];
    sy += wi * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    sxx += wi * (x[i] - mx) * (x[i] - mx);
    sxy += wi * (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

depth_regression_t depth_regression(std::span<const telemetry_event_t> events,
                                    regression_weight_t weight)
{
  std::map<int, std::pair<double, int>> by_depth;
  for (const auto& ev : events) {
    if (ev.kind != event_kind_t::node_solved || !ev.converged || !usable_kappa(ev.kappa)) {
      continue;
    }
    if (ev.status.value_or("") != "optimal") { continue; }
    auto& [sum, count] = by_depth[ev.depth];
    sum += std::log10(*ev.kappa);
    ++count;
  }
  if (by_depth.size() < 2) { throw insufficient_depths_error(); }

  depth_regression_t out;
  std::vector<double> x, w;
  for (const auto& [depth, acc] : by_depth) {
    out.depths.push_back(depth);
    out.mean_log10_kappa.push_back(acc.first / acc.second);
    out.counts.push_back(acc.second);
    x.push_back(depth);
    w.push_back(weight == regression_weight_t::per_node ? acc.second : 1.0);
  }
  std::tie(out.slope, out.intercept) = least_squares(x, out.mean_log10_kappa, w);
  return out;
}

}  // namespace kscope
