/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/model.hpp>

#include <cmath>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace kscope {

double sparse_vector_t::dot(const std::vector<double>& x) const
{
  double s = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    s += value[k] * x[index[k]];
  }
  return s;
}

double sparse_vector_t::norm2() const
{
  double s = 0.0;
  for (double v : value) {
    s += v * v;
  }
  return std::sqrt(s);
}

const char* to_string(model_errc code)
{
  switch (code) {
    case model_errc::malformed_section: return "MalformedSection";
    case model_errc::malformed_line: return "MalformedLine";
    case model_errc::duplicate_row: return "DuplicateRow";
    case model_errc::duplicate_column: return "DuplicateColumn";
    case model_errc::duplicate_entry: return "DuplicateEntry";
    case model_errc::dangling_reference: return "DanglingReference";
    case model_errc::empty_instance: return "EmptyInstance";
    case model_errc::invalid_value: return "InvalidValue";
    case model_errc::invalid_bounds: return "InvalidBounds";
  }
  return "Unknown";
}

namespace {

std::string format_error(model_errc code, const std::string& what, int line)
{
  std::ostringstream os;
  os << to_string(code);
  if (line > 0) { os << " (line " << line << ")"; }
  os << ": " << what;
  return os.str();
}

}  // namespace

model_error::model_error(model_errc code, const std::string& what, int line)
  : std::runtime_error(format_error(code, what, line)), code_(code), line_(line)
{
}

std::size_t instance_t::nnz() const
{
  std::size_t total = 0;
  for (const auto& r : rows) {
    total += r.size();
  }
  return total;
}

int instance_t::num_integer() const
{
  int count = 0;
  for (bool b : is_integer) {
    count += b ? 1 : 0;
  }
  return count;
}

std::pair<double, double> instance_t::row_bounds(int i) const
{
  const double b = rhs[i];
  const auto& r  = ranges[i];
  switch (senses[i]) {
    case row_sense_t::less_equal:
      return {r ? b - std::abs(*r) : -inf, b};
    case row_sense_t::greater_equal:
      return {b, r ? b + std::abs(*r) : inf};
    case row_sense_t::equal:
      if (r && *r > 0) { return {b, b + *r}; }
      if (r && *r < 0) { return {b + *r, b}; }
      return {b, b};
  }
  return {b, b};
}

void instance_t::validate() const
{
  const auto m = rows.size();
  const auto n = objective.size();
  if (n == 0) { throw model_error(model_errc::empty_instance, "instance has no columns"); }
  if (senses.size() != m || rhs.size() != m || ranges.size() != m || row_names.size() != m) {
    throw model_error(model_errc::invalid_value, "row data arrays disagree in length");
  }
  if (lower.size() != n || upper.size() != n || is_integer.size() != n ||
      col_names.size() != n) {
    throw model_error(model_errc::invalid_value, "column data arrays disagree in length");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : row_names) {
    if (!seen.insert(name).second) {
      throw model_error(model_errc::duplicate_row, "row '" + name + "' declared twice");
    }
  }
  seen.clear();
  for (const auto& name : col_names) {
    if (!seen.insert(name).second) {
      throw model_error(model_errc::duplicate_column, "column '" + name + "' declared twice");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = rows[i];
    if (r.index.size() != r.value.size()) {
      throw model_error(model_errc::invalid_value, "row '" + row_names[i] + "' is ragged");
    }
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r.index[k] < 0 || static_cast<std::size_t>(r.index[k]) >= n) {
        throw model_error(model_errc::dangling_reference,
                          "row '" + row_names[i] + "' references a missing column");
      }
      if (!std::isfinite(r.value[k]) || r.value[k] == 0.0) {
        throw model_error(model_errc::invalid_value,
                          "row '" + row_names[i] + "' stores a zero or non-finite coefficient");
      }
    }
    if (!std::isfinite(rhs[i]) || (ranges[i] && !std::isfinite(*ranges[i]))) {
      throw model_error(model_errc::invalid_value, "row '" + row_names[i] + "' has non-finite rhs");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) {
      throw model_error(model_errc::invalid_value,
                        "column '" + col_names[j] + "' has a non-finite objective");
    }
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == inf || upper[j] == -inf ||
        lower[j] > upper[j]) {
      throw model_error(model_errc::invalid_bounds,
                        "column '" + col_names[j] + "' has inconsistent bounds");
    }
  }
  if (!std::isfinite(objective_offset)) {
    throw model_error(model_errc::invalid_value, "objective offset is not finite");
  }
}

std::string summary(const instance_t& inst)
{
  std::ostringstream os;
  os << inst.name << ' ' << inst.num_rows() << ' ' << inst.num_cols() << ' '
     << inst.num_integer() << ' ' << inst.nnz();
  return os.str();
}

void lp_relaxation_t::append_row(sparse_vector_t row, double lo, double up, row_provenance_t prov)
{
  rows.push_back(std::move(row));
  row_lower.push_back(lo);
  row_upper.push_back(up);
  provenance.push_back(prov);
}

double lp_relaxation_t::objective_value(const std::vector<double>& x) const
{
  double z = objective_offset;
  for (std::size_t j = 0; j < objective.size(); ++j) {
    z += objective[j] * x[j];
  }
  return z;
}

lp_relaxation_t relax(const instance_t& inst)
{
  lp_relaxation_t lp;
  lp.name             = inst.name;
  lp.rows             = inst.rows;
  lp.objective        = inst.objective;
  lp.objective_offset = inst.objective_offset;
  lp.obj_sense        = inst.obj_sense;
  lp.lower            = inst.lower;
  lp.upper            = inst.upper;
  lp.is_integer       = inst.is_integer;
  const int m         = inst.num_rows();
  lp.row_lower.resize(m);
  lp.row_upper.resize(m);
  lp.provenance.assign(m, row_provenance_t{});
  for (int i = 0; i < m; ++i) {
    std::tie(lp.row_lower[i], lp.row_upper[i]) = inst.row_bounds(i);
  }
  return lp;
}

}  // namespace kscope
