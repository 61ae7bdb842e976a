/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/analysis.hpp>
#include <kscope/config.hpp>
#include <kscope/model.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kscope {

/// Resolves an instance spec (`gen:<family>:<seed>` or an MPS path relative
/// to `base_dir`). Throws model_error or std::runtime_error on failure.
instance_t load_instance(const std::string& spec, const std::string& base_dir = {});

/// File-name stem used for an instance spec's outputs.
std::string instance_label(const std::string& spec);

/// Solver settings of one experimental arm: "cuts" keeps the configured
/// cuts_mode, "nocuts" turns separation off.
solver_config_t arm_config(const solver_config_t& base, const std::string& arm);

struct run_record_t {
  std::string instance;  // label
  std::string source;    // spec as configured
  std::string arm;
  std::string config_hash;
  std::string telemetry;  // path relative to the output directory
  int exit_code{0};
  std::optional<std::string> error;
  std::optional<std::string> status;
  std::optional<double> objective;
  int nodes{0};
  int cut_rounds{0};
  int cuts_added{0};
  long lp_iterations{0};
};

struct file_digest_t {
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct manifest_t {
  std::string schema;
  std::vector<std::string> arms;
  std::vector<run_record_t> runs;
  std::vector<file_digest_t> files;
};

std::string serialize_manifest(const manifest_t& m);
manifest_t parse_manifest(const std::string& text);
manifest_t read_manifest_file(const std::string& path);

/// Per-instance statistics over both arms.
struct instance_report_t {
  std::string instance;
  std::optional<root_delta_t> root;  // cuts arm
  std::optional<root_series_t> series;
  instance_deltas_t deltas;  // cuts arm
  std::optional<double> slope_cuts;
  std::optional<double> slope_nocuts;
  bool missing_arm{false};
};

struct comparison_t {
  std::vector<instance_report_t> rows;
  delta_summary_t deltas;
  std::optional<double> mean_slope_cuts;
  std::optional<double> mean_slope_nocuts;
  int slope_pairs{0};
};

/// Loads every completed run's telemetry (paths relative to `dir`) and
/// computes the per-instance statistics. Instances lacking one of the two
/// arms are flagged missing_arm.
comparison_t compare_arms(const manifest_t& m, const std::string& dir);

/// Writes fig1_<instance>.dat, fig2.dat, fig3.dat, fig4.dat and
/// summary.csv into `dir`; returns the written paths relative to `dir`.
std::vector<std::string> write_analysis(const comparison_t& c, const std::string& dir);

/// Runs every (instance, arm) pair, writes telemetry, analysis outputs and
/// manifest.json under cfg.out. Returns the process exit status.
int run_batch(const batch_config_t& cfg, std::ostream& log);

/// Recomputes the analysis outputs next to an existing manifest and
/// refreshes its file digests.
int analyze_manifest(const std::string& manifest_path, std::ostream& log);

}  // namespace kscope
