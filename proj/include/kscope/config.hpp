/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/tree.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace kscope {

/// Validation failure of a batch configuration (process exit 2).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Batch run description. `instances` holds MPS paths or generator specs of
/// the form `gen:<family>:<seed>`; relative paths resolve against
/// `base_dir`.
struct batch_config_t {
  std::vector<std::string> instances;
  solver_config_t solver;
  std::string out{"kscope_out"};
  std::vector<std::string> arms{"cuts", "nocuts"};
  int jobs{1};
  std::string base_dir;
};

/// Every key accepted by the config file, in canonical order. Command-line
/// flags use the same names.
const std::vector<std::string>& config_keys();

/// Sets one key. `instances` and `arms` take comma separated lists;
/// `instances` appends. Throws config_error on unknown keys or bad values.
void apply_setting(batch_config_t& cfg, const std::string& key, const std::string& value);

/// key=value lines; `#` starts a comment.
batch_config_t parse_config(std::istream& in, const std::string& base_dir = {});
batch_config_t read_config_file(const std::string& path);

/// Limits positive, tolerances in (0, 1), known arms, at least one instance.
void validate(const batch_config_t& cfg);

/// Canonical key=value text of the solver knobs.
std::string canonical_text(const solver_config_t& cfg);

/// First 16 hex digits of the SHA-256 of canonical_text.
std::string config_hash(const solver_config_t& cfg);

}  // namespace kscope
