/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/batch.hpp>
#include <kscope/config.hpp>
#include <kscope/generator.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace {

int run_command(const std::string& config_path,
                const std::map<std::string, std::optional<std::string>>& overrides,
                const std::optional<std::string>& arms,
                const std::optional<std::string>& out)
{
  kscope::batch_config_t cfg;
  try {
    if (!config_path.empty()) { cfg = kscope::read_config_file(config_path); }
    for (const auto& key : kscope::config_keys()) {
      const auto it = overrides.find(key);
      if (it != overrides.end() && it->second) { kscope::apply_setting(cfg, key, *it->second); }
    }
    if (arms) { kscope::apply_setting(cfg, "arms", *arms); }
    if (const char* env = std::getenv("KSCOPE_OUT"); env && *env) { cfg.out = env; }
    if (out) { cfg.out = *out; }
    kscope::validate(cfg);
  } catch (const kscope::config_error& e) {
    std::cerr << "kscope: " << e.what() << '\n';
    return 2;
  }
  try {
    return kscope::run_batch(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "kscope: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"kscope: basis condition numbers in branch-and-cut"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "solve an instance set and write telemetry and analysis");
  std::string config_path;
  std::optional<std::string> arms, out;
  std::map<std::string, std::optional<std::string>> overrides;
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--arms", arms, "comma separated arms: cuts,nocuts");
  run->add_option("--out", out, "output directory");
  for (const auto& key : kscope::config_keys()) {
    if (key == "out" || key == "arms") { continue; }
    run->add_option("--" + key, overrides[key], "override config key " + key);
  }

  auto* analyze = app.add_subcommand("analyze", "recompute analysis outputs from a manifest");
  std::string manifest;
  analyze->add_option("--manifest", manifest, "manifest.json of a previous run")->required();

  auto* gen = app.add_subcommand("gen", "write a generated instance as MPS");
  std::string family = "knapsack";
  std::uint64_t seed = 0;
  std::string gen_out;
  gen->add_option("--family", family, "knapsack, setcover, packing or jeroslow");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*run) { return run_command(config_path, overrides, arms, out); }

  if (*analyze) {
    try {
      return kscope::analyze_manifest(manifest, std::cout);
    } catch (const std::exception& e) {
      std::cerr << "kscope: " << e.what() << '\n';
      return 1;
    }
  }

  const auto f = kscope::parse_family(family);
  if (!f) {
    std::cerr << "kscope: unknown family '" << family << "'\n";
    return 2;
  }
  const auto inst = kscope::generate(*f, seed);
  if (gen_out.empty()) {
    kscope::write_mps(std::cout, inst);
    return 0;
  }
  std::ofstream file(gen_out, std::ios::binary);
  kscope::write_mps(file, inst);
  if (!file) {
    std::cerr << "kscope: cannot write '" << gen_out << "'\n";
    return 1;
  }
  return 0;
}
