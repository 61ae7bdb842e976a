/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/model.hpp>

#include "numfmt.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace kscope {

namespace {

// Values at or beyond this magnitude are read as infinite bounds.
constexpr double mps_infinity = 1e30;

enum class section_t { none, name, objsense, rows, columns, rhs, ranges, bounds, endata };

std::vector<std::string> tokenize(const std::string& line)
{
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    out.push_back(tok);
  }
  return out;
}

double parse_value(const std::string& tok, int line_no)
{
  std::string lower;
  for (char c : tok) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "+infinity") {
    return inf;
  }
  if (lower == "-inf" || lower == "-infinity") { return -inf; }
  errno         = 0;
  char* end     = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE || std::isnan(v)) {
    throw model_error(model_errc::invalid_value, "cannot read number '" + tok + "'", line_no);
  }
  return v;
}

double as_bound(double v)
{
  if (v >= mps_infinity) { return inf; }
  if (v <= -mps_infinity) { return -inf; }
  return v;
}

struct column_builder_t {
  std::string name;
  std::vector<std::pair<int, double>> entries;  // (row, value)
  double objective{0.0};
  bool is_integer{false};
};

class mps_reader_t {
 public:
  instance_t read(std::istream& in)
  {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') { line.pop_back(); }
      if (line.empty() || line[0] == '*') { continue; }
      auto tokens = tokenize(line);
      if (tokens.empty()) { continue; }
      const bool header = !std::isspace(static_cast<unsigned char>(line[0]));
      if (header) {
        start_section(tokens, line_no);
        if (section_ == section_t::endata) { break; }
        continue;
      }
      switch (section_) {
        case section_t::objsense: read_objsense(tokens, line_no); break;
        case section_t::rows: read_row(tokens, line_no); break;
        case section_t::columns: read_column(tokens, line_no); break;
        case section_t::rhs: read_rhs(tokens, line_no, false); break;
        case section_t::ranges: read_rhs(tokens, line_no, true); break;
        case section_t::bounds: read_bound(tokens, line_no); break;
        default:
          throw model_error(model_errc::malformed_line, "data line outside of a section", line_no);
      }
    }
    return finish();
  }

 private:
  void start_section(const std::vector<std::string>& tokens, int line_no)
  {
    const std::string& key = tokens[0];
    if (key == "NAME") {
      section_ = section_t::name;
      if (tokens.size() > 1) { inst_.name = tokens[1]; }
    } else if (key == "OBJSENSE") {
      section_ = section_t::objsense;
      if (tokens.size() > 1) { read_objsense({tokens.begin() + 1, tokens.end()}, line_no); }
    } else if (key == "ROWS") {
      section_ = section_t::rows;
    } else if (key == "COLUMNS") {
      section_ = section_t::columns;
    } else if (key == "RHS") {
      section_ = section_t::rhs;
    } else if (key == "RANGES") {
      section_ = section_t::ranges;
    } else if (key == "BOUNDS") {
      section_ = section_t::bounds;
    } else if (key == "ENDATA") {
      section_ = section_t::endata;
    } else {
      throw model_error(model_errc::malformed_section, "unknown section '" + key + "'", line_no);
    }
  }

  void read_objsense(const std::vector<std::string>& tokens, int line_no)
  {
    const std::string& s = tokens[0];
    if (s == "MAX" || s == "MAXIMIZE") {
      inst_.obj_sense = obj_sense_t::maximize;
    } else if (s == "MIN" || s == "MINIMIZE") {
      inst_.obj_sense = obj_sense_t::minimize;
    } else {
      throw model_error(model_errc::malformed_line, "unknown objective sense '" + s + "'", line_no);
    }
  }

  void read_row(const std::vector<std::string>& tokens, int line_no)
  {
    if (tokens.size() != 2) {
      throw model_error(model_errc::malformed_line, "ROWS entry needs a type and a name", line_no);
    }
    const std::string& type = tokens[0];
    const std::string& name = tokens[1];
    if (row_index_.count(name) != 0 || (have_objective_ && name == inst_.objective_name) ||
        free_rows_.count(name) != 0) {
      throw model_error(model_errc::duplicate_row, "row '" + name + "' declared twice", line_no);
    }
    row_sense_t sense{};
    if (type == "N") {
      if (!have_objective_) {
        inst_.objective_name = name;
        have_objective_      = true;
      } else {
        free_rows_.insert(name);
      }
      return;
    } else if (type == "L") {
      sense = row_sense_t::less_equal;
    } else if (type == "G") {
      sense = row_sense_t::greater_equal;
    } else if (type == "E") {
      sense = row_sense_t::equal;
    } else {
      throw model_error(model_errc::malformed_line, "unknown row type '" + type + "'", line_no);
    }
    row_index_.emplace(name, static_cast<int>(inst_.row_names.size()));
    inst_.row_names.push_back(name);
    inst_.senses.push_back(sense);
  }

  void read_column(const std::vector<std::string>& tokens, int line_no)
  {
    if (tokens.size() >= 3 && tokens[1] == "'MARKER'") {
      if (tokens[2] == "'INTORG'") {
        in_integer_block_ = true;
      } else if (tokens[2] == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        throw model_error(model_errc::malformed_line, "unknown marker " + tokens[2], line_no);
      }
      return;
    }
    if (tokens.size() != 3 && tokens.size() != 5) {
      throw model_error(model_errc::malformed_line, "COLUMNS entry needs 1 or 2 pairs", line_no);
    }
    const std::string& name = tokens[0];
    if (columns_.empty() || columns_.back().name != name) {
      if (col_index_.count(name) != 0) {
        throw model_error(
          model_errc::duplicate_column, "column '" + name + "' appears twice", line_no);
      }
      col_index_.emplace(name, static_cast<int>(columns_.size()));
      columns_.push_back(column_builder_t{name, {}, 0.0, in_integer_block_});
      seen_entries_.clear();
    }
    auto& col = columns_.back();
    for (std::size_t k = 1; k + 1 < tokens.size(); k += 2) {
      const std::string& row = tokens[k];
      const double v         = parse_value(tokens[k + 1], line_no);
      if (!std::isfinite(v)) {
        throw model_error(model_errc::invalid_value, "infinite matrix coefficient", line_no);
      }
      if (!seen_entries_.insert(row).second) {
        throw model_error(model_errc::duplicate_entry,
                          "column '" + name + "' lists row '" + row + "' twice", line_no);
      }
      if (have_objective_ && row == inst_.objective_name) {
        col.objective = v;
        continue;
      }
      if (free_rows_.count(row) != 0) { continue; }
      auto it = row_index_.find(row);
      if (it == row_index_.end()) {
        throw model_error(model_errc::dangling_reference,
                          "column '" + name + "' references unknown row '" + row + "'", line_no);
      }
      if (v != 0.0) { col.entries.emplace_back(it->second, v); }
    }
  }

  // RHS and RANGES share the "[set] row value [row value]" layout.
  void read_rhs(const std::vector<std::string>& tokens, int line_no, bool ranges)
  {
    std::size_t first = tokens.size() % 2 == 1 ? 1 : 0;
    if (tokens.size() < 2 || tokens.size() > 5) {
      throw model_error(model_errc::malformed_line, "RHS/RANGES entry has wrong arity", line_no);
    }
    ensure_rhs_storage();
    for (std::size_t k = first; k + 1 < tokens.size(); k += 2) {
      const std::string& row = tokens[k];
      const double v         = parse_value(tokens[k + 1], line_no);
      if (!std::isfinite(v)) {
        throw model_error(model_errc::invalid_value, "infinite RHS/RANGES value", line_no);
      }
      if (have_objective_ && row == inst_.objective_name) {
        if (!ranges) { inst_.objective_offset = -v; }
        continue;
      }
      if (free_rows_.count(row) != 0) { continue; }
      auto it = row_index_.find(row);
      if (it == row_index_.end()) {
        throw model_error(model_errc::dangling_reference, "unknown row '" + row + "'", line_no);
      }
      if (ranges) {
        inst_.ranges[it->second] = v;
      } else {
        inst_.rhs[it->second] = v;
      }
    }
  }

  void read_bound(const std::vector<std::string>& tokens, int line_no)
  {
    if (tokens.size() < 2 || tokens.size() > 4) {
      throw model_error(model_errc::malformed_line, "BOUNDS entry has wrong arity", line_no);
    }
    const std::string& type = tokens[0];
    const bool needs_value  = type == "UP" || type == "LO" || type == "FX" || type == "LI" ||
                             type == "UI";
    const bool no_value = type == "FR" || type == "MI" || type == "PL" || type == "BV";
    if (!needs_value && !no_value) {
      throw model_error(model_errc::malformed_line, "unsupported bound type '" + type + "'",
                        line_no);
    }
    std::string col;
    double v = 0.0;
    if (needs_value) {
      if (tokens.size() < 3) {
        throw model_error(model_errc::malformed_line, "bound '" + type + "' needs a value",
                          line_no);
      }
      col = tokens[tokens.size() - 2];
      v   = as_bound(parse_value(tokens.back(), line_no));
    } else {
      // FR/MI/PL take no value; BV may carry an ignored one.
      if (tokens.size() == 4) {
        col = tokens[2];
      } else if (tokens.size() == 3) {
        col = type == "BV" && col_index_.count(tokens[1]) != 0 ? tokens[1] : tokens[2];
      } else {
        col = tokens[1];
      }
    }
    auto it = col_index_.find(col);
    if (it == col_index_.end()) {
      throw model_error(model_errc::dangling_reference, "unknown column '" + col + "'", line_no);
    }
    ensure_bound_storage();
    const int j = it->second;
    if (type == "UP" || type == "UI") {
      bounds_upper_[j] = v;
      if (v < 0 && !lower_set_[j] && bounds_lower_[j] == 0.0) { bounds_lower_[j] = -inf; }
      if (type == "UI") { columns_[j].is_integer = true; }
    } else if (type == "LO" || type == "LI") {
      bounds_lower_[j] = v;
      lower_set_[j]    = true;
      if (type == "LI") { columns_[j].is_integer = true; }
    } else if (type == "FX") {
      bounds_lower_[j] = v;
      bounds_upper_[j] = v;
      lower_set_[j]    = true;
    } else if (type == "FR") {
      bounds_lower_[j] = -inf;
      bounds_upper_[j] = inf;
      lower_set_[j]    = true;
    } else if (type == "MI") {
      bounds_lower_[j] = -inf;
      lower_set_[j]    = true;
    } else if (type == "PL") {
      bounds_upper_[j] = inf;
    } else if (type == "BV") {
      bounds_lower_[j]       = 0.0;
      bounds_upper_[j]       = 1.0;
      lower_set_[j]          = true;
      columns_[j].is_integer = true;
    }
  }

  void ensure_rhs_storage()
  {
    const auto m = inst_.row_names.size();
    if (inst_.rhs.size() != m) {
      inst_.rhs.assign(m, 0.0);
      inst_.ranges.assign(m, std::nullopt);
    }
  }

  void ensure_bound_storage()
  {
    const auto n = columns_.size();
    if (bounds_lower_.size() != n) {
      bounds_lower_.assign(n, 0.0);
      bounds_upper_.assign(n, inf);
      lower_set_.assign(n, false);
    }
  }

  instance_t finish()
  {
    if (columns_.empty()) {
      throw model_error(model_errc::empty_instance, "no columns were declared");
    }
    ensure_rhs_storage();
    ensure_bound_storage();
    const auto n = columns_.size();
    inst_.rows.assign(inst_.row_names.size(), sparse_vector_t{});
    inst_.objective.resize(n);
    inst_.col_names.resize(n);
    inst_.is_integer.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& col       = columns_[j];
      inst_.col_names[j]    = col.name;
      inst_.objective[j]    = col.objective;
      inst_.is_integer[j]   = col.is_integer;
      for (auto [i, v] : col.entries) {
        inst_.rows[i].push_back(static_cast<int>(j), v);
      }
    }
    inst_.lower = bounds_lower_;
    inst_.upper = bounds_upper_;
    inst_.validate();
    return std::move(inst_);
  }

  instance_t inst_;
  section_t section_{section_t::none};
  bool have_objective_{false};
  bool in_integer_block_{false};
  std::unordered_map<std::string, int> row_index_;
  std::unordered_set<std::string> free_rows_;
  std::unordered_map<std::string, int> col_index_;
  std::unordered_set<std::string> seen_entries_;
  std::vector<column_builder_t> columns_;
  std::vector<double> bounds_lower_;
  std::vector<double> bounds_upper_;
  std::vector<bool> lower_set_;
};

const char* sense_code(row_sense_t s)
{
  switch (s) {
    case row_sense_t::less_equal: return "L";
    case row_sense_t::greater_equal: return "G";
    case row_sense_t::equal: return "E";
  }
  return "E";
}

}  // namespace

instance_t parse_mps(std::istream& in)
{
  mps_reader_t reader;
  return reader.read(in);
}

instance_t parse_mps(std::string_view text)
{
  std::istringstream is{std::string(text)};
  return parse_mps(is);
}

instance_t read_mps_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) { throw std::runtime_error("cannot open instance file '" + path + "'"); }
  return parse_mps(in);
}

void write_mps(std::ostream& out, const instance_t& inst)
{
  using detail::format_double;
  const int m = inst.num_rows();
  const int n = inst.num_cols();

  // Column-wise view of the row-major matrix.
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  for (int i = 0; i < m; ++i) {
    const auto& r = inst.rows[i];
    for (std::size_t k = 0; k < r.size(); ++k) {
      cols[r.index[k]].emplace_back(i, r.value[k]);
    }
  }

  out << "NAME " << inst.name << '\n';
  if (inst.obj_sense == obj_sense_t::maximize) { out << "OBJSENSE\n    MAX\n"; }
  out << "ROWS\n";
  out << " N  " << inst.objective_name << '\n';
  for (int i = 0; i < m; ++i) {
    out << ' ' << sense_code(inst.senses[i]) << "  " << inst.row_names[i] << '\n';
  }
  out << "COLUMNS\n";
  bool in_block = false;
  int marker    = 0;
  for (int j = 0; j < n; ++j) {
    if (inst.is_integer[j] != in_block) {
      out << "    MARKER" << marker++ << " 'MARKER' " << (inst.is_integer[j] ? "'INTORG'" : "'INTEND'")
          << '\n';
      in_block = inst.is_integer[j];
    }
    const auto& name = inst.col_names[j];
    if (inst.objective[j] != 0.0 || cols[j].empty()) {
      out << "    " << name << ' ' << inst.objective_name << ' ' << format_double(inst.objective[j])
          << '\n';
    }
    for (auto [i, v] : cols[j]) {
      out << "    " << name << ' ' << inst.row_names[i] << ' ' << format_double(v) << '\n';
    }
  }
  if (in_block) { out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n"; }

  out << "RHS\n";
  if (inst.objective_offset != 0.0) {
    out << "    RHS " << inst.objective_name << ' ' << format_double(-inst.objective_offset) << '\n';
  }
  for (int i = 0; i < m; ++i) {
    if (inst.rhs[i] != 0.0) {
      out << "    RHS " << inst.row_names[i] << ' ' << format_double(inst.rhs[i]) << '\n';
    }
  }
  bool any_range = false;
  for (int i = 0; i < m; ++i) {
    if (!inst.ranges[i]) { continue; }
    if (!any_range) { out << "RANGES\n"; }
    any_range = true;
    out << "    RNG " << inst.row_names[i] << ' ' << format_double(*inst.ranges[i]) << '\n';
  }
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const double lo  = inst.lower[j];
    const double up  = inst.upper[j];
    const auto& name = inst.col_names[j];
    if (lo == -inf && up == inf) {
      out << " FR BND " << name << '\n';
      continue;
    }
    if (lo == up) {
      out << " FX BND " << name << ' ' << format_double(lo) << '\n';
      continue;
    }
    if (lo == -inf) {
      out << " MI BND " << name << '\n';
    } else if (lo != 0.0) {
      out << " LO BND " << name << ' ' << format_double(lo) << '\n';
    }
    if (up != inf) { out << " UP BND " << name << ' ' << format_double(up) << '\n'; }
  }
  out << "ENDATA\n";
}

std::string write_mps(const instance_t& inst)
{
  std::ostringstream os;
  write_mps(os, inst);
  return os.str();
}

}  // namespace kscope
