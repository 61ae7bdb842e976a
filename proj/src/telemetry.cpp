/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/telemetry.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace kscope {

using json = nlohmann::ordered_json;

const char* to_string(event_kind_t k)
{
  switch (k) {
    case event_kind_t::simplex_iteration: return "SimplexIteration";
    case event_kind_t::cut_round_applied: return "CutRoundApplied";
    case event_kind_t::node_branched: return "NodeBranched";
    case event_kind_t::node_solved: return "NodeSolved";
    case event_kind_t::run_meta: return "RunMeta";
  }
  return "Unknown";
}

std::optional<event_kind_t> parse_event_kind(const std::string& s)
{
  for (auto k : {event_kind_t::simplex_iteration, event_kind_t::cut_round_applied,
                 event_kind_t::node_branched, event_kind_t::node_solved, event_kind_t::run_meta}) {
    if (s == to_string(k)) { return k; }
  }
  return std::nullopt;
}

void check_event(const telemetry_event_t& ev)
{
  auto require = [&](bool present, const char* field) {
    if (!present) {
      throw telemetry_error(telemetry_errc::serialization_failure,
                            std::string("SerializationFailure: ") + to_string(ev.kind) +
                              " event is missing '" + field + "'");
    }
  };
  switch (ev.kind) {
    case event_kind_t::simplex_iteration:
      require(ev.kappa.has_value(), "kappa");
      require(ev.sigma_max.has_value(), "sigma_max");
      require(ev.sigma_min.has_value(), "sigma_min");
      require(ev.objective.has_value(), "objective");
      break;
    case event_kind_t::cut_round_applied:
      require(ev.kappa_before.has_value(), "kappa_before");
      require(ev.kappa_after.has_value(), "kappa_after");
      require(ev.round.has_value(), "round");
      require(ev.cuts_added.has_value(), "cuts_added");
      break;
    case event_kind_t::node_branched:
      require(ev.kappa_before.has_value(), "kappa_before");
      require(ev.kappa_after.has_value(), "kappa_after");
      require(ev.parent.has_value(), "parent");
      break;
    case event_kind_t::node_solved: require(ev.status.has_value(), "status"); break;
    case event_kind_t::run_meta:
      require(ev.instance.has_value(), "instance");
      require(ev.config_hash.has_value(), "config_hash");
      require(ev.schema.has_value(), "schema");
      break;
  }
  require(std::isfinite(ev.wall_time), "wall_time");
}

namespace {

json number(double v)
{
  if (std::isnan(v)) { return "nan"; }
  if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
  return v;
}

double read_number(const json& j)
{
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") { return INFINITY; }
    if (s == "-inf") { return -INFINITY; }
    if (s == "nan") { return NAN; }
    throw telemetry_error(telemetry_errc::parse_failure, "bad numeric field '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::string serialize_event(const telemetry_event_t& ev)
{
  check_event(ev);
  json j;
  j["kind"]      = to_string(ev.kind);
  j["run_id"]    = ev.run_id;
  j["node_id"]   = ev.node_id;
  j["depth"]     = ev.depth;
  j["iteration"] = ev.iteration;
  auto put_d     = [&](const char* key, const std::optional<double>& v) {
    if (v) { j[key] = number(*v); }
  };
  auto put_i = [&](const char* key, const std::optional<int>& v) {
    if (v) { j[key] = *v; }
  };
  auto put_s = [&](const char* key, const std::optional<std::string>& v) {
    if (v) { j[key] = *v; }
  };
  put_d("kappa", ev.kappa);
  put_d("sigma_max", ev.sigma_max);
  put_d("sigma_min", ev.sigma_min);
  j["converged"] = ev.converged;
  put_d("objective", ev.objective);
  put_i("round", ev.round);
  put_i("cuts_added", ev.cuts_added);
  put_d("kappa_before", ev.kappa_before);
  put_d("kappa_after", ev.kappa_after);
  j["wall_time"] = number(ev.wall_time);
  put_i("parent", ev.parent);
  put_i("branch_var", ev.branch_var);
  put_s("status", ev.status);
  put_s("instance", ev.instance);
  put_s("config_hash", ev.config_hash);
  put_s("schema", ev.schema);
  return j.dump();
}

telemetry_event_t parse_event(const std::string& line)
{
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw telemetry_error(telemetry_errc::parse_failure, std::string("ParseFailure: ") + e.what());
  }
  telemetry_event_t ev;
  try {
    const auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) { throw telemetry_error(telemetry_errc::parse_failure, "unknown event kind"); }
    ev.kind      = *kind;
    ev.run_id    = j.at("run_id").get<std::string>();
    ev.node_id   = j.at("node_id").get<int>();
    ev.depth     = j.at("depth").get<int>();
    ev.iteration = j.at("iteration").get<int>();
    ev.converged = j.at("converged").get<bool>();
    ev.wall_time = read_number(j.at("wall_time"));
    auto get_d   = [&](const char* key, std::optional<double>& v) {
      if (j.contains(key)) { v = read_number(j[key]); }
    };
    auto get_i = [&](const char* key, std::optional<int>& v) {
      if (j.contains(key)) { v = j[key].get<int>(); }
    };
    auto get_s = [&](const char* key, std::optional<std::string>& v) {
      if (j.contains(key)) { v = j[key].get<std::string>(); }
    };
    get_d("kappa", ev.kappa);
    get_d("sigma_max", ev.sigma_max);
    get_d("sigma_min", ev.sigma_min);
    get_d("objective", ev.objective);
    get_i("round", ev.round);
    get_i("cuts_added", ev.cuts_added);
    get_d("kappa_before", ev.kappa_before);
    get_d("kappa_after", ev.kappa_after);
    get_i("parent", ev.parent);
    get_i("branch_var", ev.branch_var);
    get_s("status", ev.status);
    get_s("instance", ev.instance);
    get_s("config_hash", ev.config_hash);
    get_s("schema", ev.schema);
  } catch (const json::exception& e) {
    throw telemetry_error(telemetry_errc::parse_failure, std::string("ParseFailure: ") + e.what());
  }
  return ev;
}

void telemetry_sink_t::record(const telemetry_event_t& ev)
{
  if (closed_) {
    throw telemetry_error(telemetry_errc::sink_closed, "SinkClosed: record after close");
  }
  check_event(ev);
  append(ev);
}

stream_sink_t::stream_sink_t(std::ostream& out, const telemetry_event_t& meta) : out_(out)
{
  out_ << serialize_event(meta) << '\n';
}

void stream_sink_t::append(const telemetry_event_t& ev)
{
  out_ << serialize_event(ev) << '\n';
  if (!out_) { throw telemetry_error(telemetry_errc::io_failure, "IoFailure: write failed"); }
}

telemetry_event_t make_run_meta(const std::string& run_id,
                                const std::string& instance,
                                const std::string& config_hash)
{
  telemetry_event_t meta;
  meta.kind        = event_kind_t::run_meta;
  meta.run_id      = run_id;
  meta.instance    = instance;
  meta.config_hash = config_hash;
  meta.schema      = telemetry_schema_version;
  return meta;
}

void write_stream(std::ostream& out,
                  const telemetry_event_t& meta,
                  const std::vector<telemetry_event_t>& events)
{
  out << serialize_event(meta) << '\n';
  for (const auto& ev : events) {
    out << serialize_event(ev) << '\n';
  }
  if (!out) { throw telemetry_error(telemetry_errc::io_failure, "IoFailure: write failed"); }
}

void write_stream_file(const std::string& path,
                       const telemetry_event_t& meta,
                       const std::vector<telemetry_event_t>& events)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw telemetry_error(telemetry_errc::io_failure, "IoFailure: cannot open '" + path + "'");
  }
  write_stream(out, meta, events);
}

telemetry_stream_t read_stream(std::istream& in)
{
  telemetry_stream_t stream;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) { continue; }
    auto ev = parse_event(line);
    if (first) {
      if (ev.kind != event_kind_t::run_meta) {
        throw telemetry_error(telemetry_errc::parse_failure,
                              "ParseFailure: stream does not start with RunMeta");
      }
      stream.meta = std::move(ev);
      first       = false;
    } else {
      stream.events.push_back(std::move(ev));
    }
  }
  if (first) {
    throw telemetry_error(telemetry_errc::parse_failure, "ParseFailure: empty telemetry stream");
  }
  return stream;
}

telemetry_stream_t read_stream_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw telemetry_error(telemetry_errc::io_failure, "IoFailure: cannot open '" + path + "'");
  }
  return read_stream(in);
}

}  // namespace kscope
