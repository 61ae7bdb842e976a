/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/batch.hpp>
#include <kscope/digest.hpp>
#include <kscope/generator.hpp>
#include <kscope/telemetry.hpp>
#include <kscope/tree.hpp>

#include "numfmt.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace kscope {

namespace fs = std::filesystem;
using json   = nlohmann::ordered_json;
using detail::format_double;

namespace {

constexpr const char* gen_prefix = "gen:";

std::string sanitize(const std::string& s)
{
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? std::string("instance") : out;
}

std::string cell(const std::optional<double>& v)
{
  return v ? format_double(*v) : std::string();
}

std::string dat(const std::optional<double>& v)
{
  return v ? format_double(*v) : std::string("nan");
}

void write_text(const fs::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) { throw std::runtime_error("cannot write '" + path.string() + "'"); }
}

std::optional<double> mean_of(const std::vector<double>& v)
{
  if (v.empty()) { return std::nullopt; }
  double s = 0.0;
  for (double x : v) {
    s += x;
  }
  return s / static_cast<double>(v.size());
}

}  // namespace

instance_t load_instance(const std::string& spec, const std::string& base_dir)
{
  if (spec.rfind(gen_prefix, 0) == 0) {
    const std::string rest = spec.substr(std::string(gen_prefix).size());
    const auto colon       = rest.find(':');
    const auto family      = parse_family(rest.substr(0, colon));
    std::uint64_t seed     = 0;
    if (colon != std::string::npos) {
      const std::string s = rest.substr(colon + 1);
      auto [p, ec]        = std::from_chars(s.data(), s.data() + s.size(), seed);
      if (ec != std::errc{} || p != s.data() + s.size()) { throw std::runtime_error("bad seed in '" + spec + "'"); }
    }
    if (!family) { throw std::runtime_error("unknown family in '" + spec + "'"); }
    return generate(*family, seed);
  }
  fs::path path(spec);
  if (path.is_relative() && !base_dir.empty()) { path = fs::path(base_dir) / path; }
  return read_mps_file(path.string());
}

std::string instance_label(const std::string& spec)
{
  if (spec.rfind(gen_prefix, 0) == 0) {
    std::string rest = spec.substr(std::string(gen_prefix).size());
    std::replace(rest.begin(), rest.end(), ':', '_');
    return sanitize(rest);
  }
  return sanitize(fs::path(spec).stem().string());
}

solver_config_t arm_config(const solver_config_t& base, const std::string& arm)
{
  solver_config_t cfg = base;
  if (arm == "nocuts") { cfg.cuts_mode = cuts_mode_t::off; }
  return cfg;
}

std::string serialize_manifest(const manifest_t& m)
{
  json j;
  j["schema"] = m.schema;
  j["arms"]   = m.arms;
  j["runs"]   = json::array();
  for (const auto& r : m.runs) {
    json jr;
    jr["instance"]    = r.instance;
    jr["source"]      = r.source;
    jr["arm"]         = r.arm;
    jr["config_hash"] = r.config_hash;
    jr["telemetry"]   = r.telemetry;
    jr["exit_code"]   = r.exit_code;
    if (r.error) { jr["error"] = *r.error; }
    if (r.status) { jr["status"] = *r.status; }
    if (r.objective) { jr["objective"] = *r.objective; }
    jr["nodes"]         = r.nodes;
    jr["cut_rounds"]    = r.cut_rounds;
    jr["cuts_added"]    = r.cuts_added;
    jr["lp_iterations"] = r.lp_iterations;
    j["runs"].push_back(std::move(jr));
  }
  j["files"] = json::array();
  for (const auto& f : m.files) {
    j["files"].push_back(json{{"path", f.path}, {"sha256", f.sha256}});
  }
  return j.dump(2) + "\n";
}

manifest_t parse_manifest(const std::string& text)
{
  manifest_t m;
  try {
    const auto j = json::parse(text);
    m.schema     = j.at("schema").get<std::string>();
    m.arms       = j.at("arms").get<std::vector<std::string>>();
    for (const auto& jr : j.at("runs")) {
      run_record_t r;
      r.instance    = jr.at("instance").get<std::string>();
      r.source      = jr.at("source").get<std::string>();
      r.arm         = jr.at("arm").get<std::string>();
      r.config_hash = jr.at("config_hash").get<std::string>();
      r.telemetry   = jr.at("telemetry").get<std::string>();
      r.exit_code   = jr.at("exit_code").get<int>();
      if (jr.contains("error")) { r.error = jr["error"].get<std::string>(); }
      if (jr.contains("status")) { r.status = jr["status"].get<std::string>(); }
      if (jr.contains("objective")) { r.objective = jr["objective"].get<double>(); }
      r.nodes         = jr.value("nodes", 0);
      r.cut_rounds    = jr.value("cut_rounds", 0);
      r.cuts_added    = jr.value("cuts_added", 0);
      r.lp_iterations = jr.value("lp_iterations", 0L);
      m.runs.push_back(std::move(r));
    }
    for (const auto& jf : j.at("files")) {
      m.files.push_back(
        file_digest_t{jf.at("path").get<std::string>(), jf.at("sha256").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

manifest_t read_manifest_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw std::runtime_error("cannot open manifest '" + path + "'"); }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

comparison_t compare_arms(const manifest_t& m, const std::string& dir)
{
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, const run_record_t*>> by_instance;
  for (const auto& r : m.runs) {
    if (!by_instance.count(r.instance)) { order.push_back(r.instance); }
    auto& arms = by_instance[r.instance];
    if (r.exit_code == 0 && !r.telemetry.empty()) { arms[r.arm] = &r; }
  }

  auto load = [&](const run_record_t& r) {
    return read_stream_file((fs::path(dir) / r.telemetry).string()).events;
  };
  auto slope = [](const std::vector<telemetry_event_t>& events) -> std::optional<double> {
    try {
      return depth_regression(events).slope;
    } catch (const insufficient_depths_error&) {
      return std::nullopt;
    }
  };

  comparison_t out;
  std::map<std::string, instance_deltas_t> deltas;
  std::vector<double> slopes_cuts, slopes_nocuts;
  for (const auto& name : order) {
    instance_report_t row;
    row.instance    = name;
    const auto& arms = by_instance[name];
    const auto cuts  = arms.find("cuts");
    const auto plain = arms.find("nocuts");
    row.missing_arm  = cuts == arms.end() || plain == arms.end();

    if (cuts != arms.end()) {
      const auto events = load(*cuts->second);
      try {
        row.root   = root_delta_summary(events);
        row.series = root_series(events);
      } catch (const no_root_events_error&) {
      }
      row.deltas     = node_delta_stats(events);
      row.slope_cuts = slope(events);
      deltas[name]   = row.deltas;
    }
    if (plain != arms.end()) {
      const auto events = load(*plain->second);
      row.slope_nocuts  = slope(events);
      if (cuts == arms.end()) {
        row.deltas   = node_delta_stats(events);
        deltas[name] = row.deltas;
      }
    }
    if (row.slope_cuts) { slopes_cuts.push_back(*row.slope_cuts); }
    if (row.slope_nocuts) { slopes_nocuts.push_back(*row.slope_nocuts); }
    if (row.slope_cuts && row.slope_nocuts) { ++out.slope_pairs; }
    out.rows.push_back(std::move(row));
  }
  out.deltas            = summarize_deltas(deltas);
  out.mean_slope_cuts   = mean_of(slopes_cuts);
  out.mean_slope_nocuts = mean_of(slopes_nocuts);
  return out;
}

std::vector<std::string> write_analysis(const comparison_t& c, const std::string& dir)
{
  std::vector<std::string> files;
  const fs::path base(dir);

  for (const auto& row : c.rows) {
    if (!row.series) { continue; }
    std::ostringstream out;
    out << "# iteration log10_kappa objective round_start\n";
    out << "# round_boundaries";
    for (int b : row.series->round_boundaries) {
      out << ' ' << b;
    }
    out << '\n';
    for (const auto& p : row.series->points) {
      const auto& rb    = row.series->round_boundaries;
      const bool starts = std::find(rb.begin(), rb.end(), p.iteration) != rb.end();
      out << p.iteration << ' ' << format_double(p.log10_kappa) << ' '
          << format_double(p.objective) << ' ' << (starts ? 1 : 0) << '\n';
    }
    const std::string name = "fig1_" + row.instance + ".dat";
    write_text(base / name, out.str());
    files.push_back(name);
  }

  {
    std::ostringstream out;
    out << "# instance kappa_original kappa_mean_cutting kappa_final\n";
    for (const auto& row : c.rows) {
      if (!row.root) { continue; }
      out << row.instance << ' ' << format_double(row.root->kappa_original) << ' '
          << dat(row.root->kappa_mean_cutting) << ' ' << dat(row.root->kappa_final) << '\n';
    }
    write_text(base / "fig2.dat", out.str());
    files.push_back("fig2.dat");
  }

  {
    std::ostringstream out;
    out << "# instance branch_delta cut_delta branch_count cut_count\n";
    out << "# mean_branch_delta " << dat(c.deltas.branch_mean) << '\n';
    out << "# mean_cut_delta " << dat(c.deltas.cut_mean) << '\n';
    for (const auto& row : c.rows) {
      out << row.instance << ' ' << dat(row.deltas.branch_mean) << ' '
          << dat(row.deltas.cut_mean) << ' ' << row.deltas.branch_count << ' '
          << row.deltas.cut_count << '\n';
    }
    write_text(base / "fig3.dat", out.str());
    files.push_back("fig3.dat");
  }

  {
    std::ostringstream out;
    out << "# instance slope_cuts slope_nocuts\n";
    out << "# mean_slope_cuts " << dat(c.mean_slope_cuts) << '\n';
    out << "# mean_slope_nocuts " << dat(c.mean_slope_nocuts) << '\n';
    for (const auto& row : c.rows) {
      out << row.instance << ' ' << dat(row.slope_cuts) << ' ' << dat(row.slope_nocuts) << '\n';
    }
    write_text(base / "fig4.dat", out.str());
    files.push_back("fig4.dat");
  }

  {
    std::ostringstream out;
    out << "instance,kappa_original,kappa_mean_cut,kappa_final,branch_delta,cut_delta,"
           "slope_cuts,slope_nocuts,flag\n";
    for (const auto& row : c.rows) {
      out << row.instance << ','
          << (row.root ? format_double(row.root->kappa_original) : std::string()) << ','
          << (row.root ? cell(row.root->kappa_mean_cutting) : std::string()) << ','
          << (row.root ? cell(row.root->kappa_final) : std::string()) << ','
          << cell(row.deltas.branch_mean) << ',' << cell(row.deltas.cut_mean) << ','
          << cell(row.slope_cuts) << ',' << cell(row.slope_nocuts) << ','
          << (row.missing_arm ? "MissingArm" : "") << '\n';
    }
    write_text(base / "summary.csv", out.str());
    files.push_back("summary.csv");
  }
  return files;
}

namespace {

struct task_t {
  std::string source;
  std::string label;
  std::string arm;
};

run_record_t execute(const task_t& task, const batch_config_t& cfg, const fs::path& out_dir)
{
  run_record_t rec;
  rec.instance      = task.label;
  rec.source        = task.source;
  rec.arm           = task.arm;
  const auto solver = arm_config(cfg.solver, task.arm);
  rec.config_hash   = config_hash(solver);

  instance_t inst;
  try {
    inst = load_instance(task.source, cfg.base_dir);
  } catch (const std::exception& e) {
    rec.exit_code = 1;
    rec.error     = e.what();
    return rec;
  }

  const std::string rel  = "telemetry/" + task.label + "__" + task.arm + ".jsonl";
  const fs::path path    = out_dir / rel;
  const std::string id   = task.label + "__" + task.arm;
  try {
    std::ofstream file(path, std::ios::binary);
    if (!file) { throw std::runtime_error("cannot write '" + path.string() + "'"); }
    stream_sink_t sink(file, make_run_meta(id, task.label, rec.config_hash));
    const auto result = solve(inst, solver, &sink, id);
    sink.close();
    file.close();
    if (!file) { throw std::runtime_error("cannot write '" + path.string() + "'"); }
    rec.telemetry     = rel;
    rec.status        = to_string(result.status);
    rec.objective     = result.objective;
    rec.nodes         = result.nodes_processed;
    rec.cut_rounds    = result.cut_rounds;
    rec.cuts_added    = result.cuts_added;
    rec.lp_iterations = result.lp_iterations;
  } catch (const std::exception& e) {
    std::error_code ec;
    fs::remove(path, ec);
    rec.exit_code = 1;
    rec.error     = e.what();
  }
  return rec;
}

std::vector<file_digest_t> digest_files(const fs::path& dir, std::vector<std::string> paths)
{
  std::sort(paths.begin(), paths.end());
  std::vector<file_digest_t> out;
  for (auto& p : paths) {
    out.push_back(file_digest_t{p, sha256_file((dir / p).string())});
  }
  return out;
}

}  // namespace

int run_batch(const batch_config_t& cfg, std::ostream& log)
{
  validate(cfg);
  const fs::path out_dir(cfg.out);
  fs::create_directories(out_dir / "telemetry");

  std::vector<task_t> tasks;
  std::map<std::string, int> seen;
  for (const auto& source : cfg.instances) {
    std::string label = instance_label(source);
    if (const int n = seen[label]++; n > 0) { label += "_" + std::to_string(n + 1); }
    for (const auto& arm : cfg.arms) {
      tasks.push_back(task_t{source, label, arm});
    }
  }

  std::vector<run_record_t> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      records[i] = execute(tasks[i], cfg, out_dir);
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(tasks.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  manifest_t manifest;
  manifest.schema = telemetry_schema_version;
  manifest.arms   = cfg.arms;
  manifest.runs   = std::move(records);

  int exit_code = 0;
  std::vector<std::string> produced;
  for (const auto& r : manifest.runs) {
    exit_code = std::max(exit_code, r.exit_code);
    if (!r.telemetry.empty()) { produced.push_back(r.telemetry); }
    log << r.instance << ' ' << r.arm << ' ';
    if (r.error) {
      log << "error: " << *r.error << '\n';
    } else {
      log << r.status.value_or("?") << " objective=" << dat(r.objective) << " nodes=" << r.nodes
          << " cuts=" << r.cuts_added << '\n';
    }
  }

  const auto comparison = compare_arms(manifest, out_dir.string());
  for (auto& f : write_analysis(comparison, out_dir.string())) {
    produced.push_back(std::move(f));
  }
  manifest.files = digest_files(out_dir, std::move(produced));
  write_text(out_dir / "manifest.json", serialize_manifest(manifest));
  return exit_code;
}

int analyze_manifest(const std::string& manifest_path, std::ostream& log)
{
  auto manifest    = read_manifest_file(manifest_path);
  const fs::path dir = fs::path(manifest_path).parent_path();
  const auto comparison = compare_arms(manifest, dir.string());

  std::vector<std::string> produced;
  for (const auto& r : manifest.runs) {
    if (r.exit_code == 0 && !r.telemetry.empty()) { produced.push_back(r.telemetry); }
  }
  for (auto& f : write_analysis(comparison, dir.string())) {
    produced.push_back(std::move(f));
  }
  manifest.files = digest_files(dir, std::move(produced));
  write_text(fs::path(manifest_path), serialize_manifest(manifest));

  for (const auto& row : comparison.rows) {
    log << row.instance << " slope_cuts=" << dat(row.slope_cuts)
        << " slope_nocuts=" << dat(row.slope_nocuts) << (row.missing_arm ? " MissingArm" : "")
        << '\n';
  }
  log << "mean_slope_cuts=" << dat(comparison.mean_slope_cuts)
      << " mean_slope_nocuts=" << dat(comparison.mean_slope_nocuts) << '\n';
  return 0;
}

}  // namespace kscope
