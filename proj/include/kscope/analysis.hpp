/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/telemetry.hpp>

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kscope {

class analysis_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class no_root_events_error : public analysis_error {
 public:
  no_root_events_error() : analysis_error("NoRootEvents: stream has no root SimplexIteration") {}
};

class insufficient_depths_error : public analysis_error {
 public:
  insufficient_depths_error() : analysis_error("InsufficientDepths: fewer than 2 depths") {}
};

struct root_point_t {
  int iteration{0};
  double log10_kappa{0.0};
  double objective{0.0};
  bool converged{true};
};

/// Per-iteration log10 kappa at the root with the iterations where each cut
/// round's re-solve begins.
struct root_series_t {
  std::vector<root_point_t> points;
  std::vector<int> round_boundaries;
};

root_series_t root_series(std::span<const telemetry_event_t> events);

enum class mean_kind_t { geometric, arithmetic };

/// Root node: optimal-basis kappa of the original LP, the mean kappa over
/// bases seen while re-solving after cut rounds, and the final optimal kappa.
struct root_delta_t {
  double kappa_original{1.0};
  std::optional<double> kappa_mean_cutting;
  std::optional<double> kappa_final;

  /// log10(final / original); absent without cut rounds.
  std::optional<double> signed_log_change() const;
};

/// Throws no_root_events_error when the root never solved an LP.
root_delta_t root_delta_summary(std::span<const telemetry_event_t> events,
                                mean_kind_t mean = mean_kind_t::geometric);

enum class change_kind_t { log_ratio, relative };

/// log10(after / before) or (after - before) / before.
double relative_change(double before, double after, change_kind_t kind = change_kind_t::log_ratio);

struct instance_deltas_t {
  std::optional<double> branch_mean;
  std::optional<double> cut_mean;
  int branch_count{0};
  int cut_count{0};
};

/// Mean change per event over converged NodeBranched and CutRoundApplied
/// pairs of one instance's stream.
instance_deltas_t node_delta_stats(std::span<const telemetry_event_t> events,
                                   change_kind_t kind = change_kind_t::log_ratio);

struct delta_summary_t {
  std::map<std::string, instance_deltas_t> per_instance;
  std::optional<double> branch_mean;  // mean over instances with branch data
  std::optional<double> cut_mean;
  int branch_instances{0};
  int cut_instances{0};
};

delta_summary_t summarize_deltas(const std::map<std::string, instance_deltas_t>& per_instance);

struct depth_regression_t {
  std::vector<int> depths;
  std::vector<double> mean_log10_kappa;
  std::vector<int> counts;
  double slope{0.0};
  double intercept{0.0};
};

enum class regression_weight_t { per_depth, per_node };

/// Least squares fit of per-depth mean log10 kappa (from converged
/// NodeSolved events of optimal LPs) against depth.
depth_regression_t depth_regression(std::span<const telemetry_event_t> events,
                                    regression_weight_t weight = regression_weight_t::per_depth);

/// Ordinary least squares (slope, intercept) with optional weights.
std::pair<double, double> least_squares(std::span<const double> x,
                                        std::span<const double> y,
                                        std::span<const double> w = {});

}  // namespace kscope
