/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kscope {

inline constexpr const char* telemetry_schema_version = "kscope-v1";

enum class event_kind_t : std::uint8_t {
  simplex_iteration,
  cut_round_applied,
  node_branched,
  node_solved,
  run_meta,
};

const char* to_string(event_kind_t k);
std::optional<event_kind_t> parse_event_kind(const std::string& s);

/// One record of the telemetry stream. Optional fields are omitted from the
/// serialized record when absent.
struct telemetry_event_t {
  event_kind_t kind{event_kind_t::simplex_iteration};
  std::string run_id;
  int node_id{0};
  int depth{0};
  int iteration{0};
  std::optional<double> kappa;
  std::optional<double> sigma_max;
  std::optional<double> sigma_min;
  bool converged{false};
  std::optional<double> objective;
  std::optional<int> round;
  std::optional<int> cuts_added;
  std::optional<double> kappa_before;
  std::optional<double> kappa_after;
  double wall_time{0.0};
  // node_branched
  std::optional<int> parent;
  std::optional<int> branch_var;
  // node_solved: "optimal", "infeasible", ...
  std::optional<std::string> status;
  // run_meta
  std::optional<std::string> instance;
  std::optional<std::string> config_hash;
  std::optional<std::string> schema;

  bool operator==(const telemetry_event_t&) const = default;
};

enum class telemetry_errc { sink_closed, serialization_failure, io_failure, parse_failure };

class telemetry_error : public std::runtime_error {
 public:
  telemetry_error(telemetry_errc code, const std::string& what)
    : std::runtime_error(what), code_(code)
  {
  }
  telemetry_errc code() const { return code_; }

 private:
  telemetry_errc code_;
};

/// Throws serialization_failure when a field required by the event's kind
/// is missing.
void check_event(const telemetry_event_t& ev);

std::string serialize_event(const telemetry_event_t& ev);
telemetry_event_t parse_event(const std::string& line);

class telemetry_sink_t {
 public:
  virtual ~telemetry_sink_t() = default;

  /// Appends in order; throws telemetry_error on a closed sink or an
  /// incomplete event.
  void record(const telemetry_event_t& ev);
  void close() { closed_ = true; }
  bool closed() const { return closed_; }

 protected:
  virtual void append(const telemetry_event_t& ev) = 0;

 private:
  bool closed_{false};
};

class memory_sink_t final : public telemetry_sink_t {
 public:
  const std::vector<telemetry_event_t>& events() const { return events_; }

 protected:
  void append(const telemetry_event_t& ev) override { events_.push_back(ev); }

 private:
  std::vector<telemetry_event_t> events_;
};

/// Writes one JSON record per line, starting with the RunMeta record.
class stream_sink_t final : public telemetry_sink_t {
 public:
  stream_sink_t(std::ostream& out, const telemetry_event_t& meta);

 protected:
  void append(const telemetry_event_t& ev) override;

 private:
  std::ostream& out_;
};

telemetry_event_t make_run_meta(const std::string& run_id,
                                const std::string& instance,
                                const std::string& config_hash);

/// RunMeta line followed by one line per event.
void write_stream(std::ostream& out,
                  const telemetry_event_t& meta,
                  const std::vector<telemetry_event_t>& events);
void write_stream_file(const std::string& path,
                       const telemetry_event_t& meta,
                       const std::vector<telemetry_event_t>& events);

struct telemetry_stream_t {
  telemetry_event_t meta;
  std::vector<telemetry_event_t> events;
};

telemetry_stream_t read_stream(std::istream& in);
telemetry_stream_t read_stream_file(const std::string& path);

}  // namespace kscope
