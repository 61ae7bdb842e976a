/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/config.hpp>
#include <kscope/digest.hpp>

#include "numfmt.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

namespace kscope {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) { return {}; }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) { out.push_back(item); }
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value)
{
  T v{};
  const auto* b = value.data();
  const auto* e = value.data() + value.size();
  auto [p, ec]  = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e) {
    throw config_error("invalid value for " + key + ": '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value)
{
  if (value == "true" || value == "1" || value == "on" || value == "yes") { return true; }
  if (value == "false" || value == "0" || value == "off" || value == "no") { return false; }
  throw config_error("invalid value for " + key + ": '" + value + "'");
}

}  // namespace

const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> keys{
    "instances",          "node_limit",       "time_limit",       "cuts_mode",
    "kappa_every_iteration", "max_cuts_per_round", "root_round_limit", "node_round_limit",
    "tol_feas",           "tol_int",          "tol_pi",           "max_pi",
    "max_lp_iterations",  "seed",             "record_wall_time", "out",
    "arms",               "jobs"};
  return keys;
}

void apply_setting(batch_config_t& cfg, const std::string& key, const std::string& raw)
{
  const std::string value = trim(raw);
  auto& s                 = cfg.solver;
  if (key == "instances") {
    for (auto& i : split_list(value)) {
      cfg.instances.push_back(std::move(i));
    }
  } else if (key == "node_limit") {
    s.node_limit = parse_number<int>(key, value);
  } else if (key == "time_limit") {
    s.time_limit = parse_number<double>(key, value);
  } else if (key == "cuts_mode") {
    auto m = parse_cuts_mode(value);
    if (!m) { throw config_error("invalid value for cuts_mode: '" + value + "'"); }
    s.cuts_mode = *m;
  } else if (key == "kappa_every_iteration") {
    s.kappa_every_iteration = parse_bool(key, value);
  } else if (key == "max_cuts_per_round") {
    s.max_cuts_per_round = parse_number<int>(key, value);
  } else if (key == "root_round_limit") {
    s.root_round_limit = parse_number<int>(key, value);
  } else if (key == "node_round_limit") {
    s.node_round_limit = parse_number<int>(key, value);
  } else if (key == "tol_feas") {
    s.tol_feas = parse_number<double>(key, value);
  } else if (key == "tol_int") {
    s.tol_int = parse_number<double>(key, value);
  } else if (key == "tol_pi") {
    s.tol_pi = parse_number<double>(key, value);
  } else if (key == "max_pi") {
    s.max_pi = parse_number<int>(key, value);
  } else if (key == "max_lp_iterations") {
    s.max_lp_iterations = parse_number<int>(key, value);
  } else if (key == "seed") {
    s.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "record_wall_time") {
    s.record_wall_time = parse_bool(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "arms") {
    cfg.arms = split_list(value);
  } else if (key == "jobs") {
    cfg.jobs = parse_number<int>(key, value);
  } else {
    throw config_error("unknown config key '" + key + "'");
  }
}

batch_config_t parse_config(std::istream& in, const std::string& base_dir)
{
  batch_config_t cfg;
  cfg.base_dir = base_dir;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) { line.erase(hash); }
    line = trim(line);
    if (line.empty()) { continue; }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

batch_config_t read_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) { throw config_error("cannot read config '" + path + "'"); }
  return parse_config(in, std::filesystem::path(path).parent_path().string());
}

void validate(const batch_config_t& cfg)
{
  const auto& s = cfg.solver;
  if (cfg.instances.empty()) { throw config_error("no instances"); }
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0)) { throw config_error(std::string(name) + " must be positive"); }
  };
  positive("node_limit", s.node_limit);
  positive("time_limit", s.time_limit);
  positive("max_cuts_per_round", s.max_cuts_per_round);
  positive("root_round_limit", s.root_round_limit);
  positive("node_round_limit", s.node_round_limit);
  positive("max_pi", s.max_pi);
  positive("max_lp_iterations", s.max_lp_iterations);
  positive("jobs", cfg.jobs);
  auto unit = [](const char* name, double v) {
    if (!(v > 0.0 && v < 1.0)) { throw config_error(std::string(name) + " must lie in (0, 1)"); }
  };
  unit("tol_feas", s.tol_feas);
  unit("tol_int", s.tol_int);
  unit("tol_pi", s.tol_pi);
  if (cfg.arms.empty()) { throw config_error("no arms"); }
  for (const auto& a : cfg.arms) {
    if (a != "cuts" && a != "nocuts") { throw config_error("unknown arm '" + a + "'"); }
  }
  if (cfg.out.empty()) { throw config_error("empty output directory"); }
}

std::string canonical_text(const solver_config_t& s)
{
  using detail::format_double;
  std::ostringstream out;
  out << "node_limit=" << s.node_limit << '\n'
      << "time_limit=" << format_double(s.time_limit) << '\n'
      << "cuts_mode=" << to_string(s.cuts_mode) << '\n'
      << "kappa_every_iteration=" << (s.kappa_every_iteration ? "true" : "false") << '\n'
      << "max_cuts_per_round=" << s.max_cuts_per_round << '\n'
      << "root_round_limit=" << s.root_round_limit << '\n'
      << "node_round_limit=" << s.node_round_limit << '\n'
      << "tol_feas=" << format_double(s.tol_feas) << '\n'
      << "tol_int=" << format_double(s.tol_int) << '\n'
      << "tol_pi=" << format_double(s.tol_pi) << '\n'
      << "max_pi=" << s.max_pi << '\n'
      << "max_lp_iterations=" << s.max_lp_iterations << '\n'
      << "seed=" << s.seed << '\n'
      << "record_wall_time=" << (s.record_wall_time ? "true" : "false") << '\n';
  return out.str();
}

std::string config_hash(const solver_config_t& cfg)
{
  return sha256_hex(canonical_text(cfg)).substr(0, 16);
}

}  // namespace kscope
