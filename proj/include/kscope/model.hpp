/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kscope {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class row_sense_t : std::uint8_t { less_equal, greater_equal, equal };
enum class obj_sense_t : std::uint8_t { minimize, maximize };

struct sparse_vector_t {
  std::vector<int> index;
  std::vector<double> value;

  std::size_t size() const { return index.size(); }
  void push_back(int i, double v)
  {
    index.push_back(i);
    value.push_back(v);
  }
  double dot(const std::vector<double>& x) const;
  double norm2() const;
  bool operator==(const sparse_vector_t&) const = default;
};

enum class model_errc {
  malformed_section,
  malformed_line,
  duplicate_row,
  duplicate_column,
  duplicate_entry,
  dangling_reference,
  empty_instance,
  invalid_value,
  invalid_bounds,
};

const char* to_string(model_errc code);

class model_error : public std::runtime_error {
 public:
  model_error(model_errc code, const std::string& what, int line = 0);
  model_errc code() const { return code_; }
  int line() const { return line_; }

 private:
  model_errc code_;
  int line_;
};

/// A mixed integer linear program in row form.
///
/// Rows are `lo_i <= a_i x <= up_i` where the bounds derive from the sense,
/// rhs and optional MPS range of the row (see `row_bounds`).
struct instance_t {
  std::string name;
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<sparse_vector_t> rows;
  std::vector<row_sense_t> senses;
  std::vector<double> rhs;
  std::vector<std::optional<double>> ranges;
  std::vector<double> objective;
  double objective_offset{0.0};
  std::string objective_name{"obj"};
  obj_sense_t obj_sense{obj_sense_t::minimize};
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> is_integer;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const { return static_cast<int>(objective.size()); }
  std::size_t nnz() const;
  int num_integer() const;

  /// Activity bounds of row i after applying the MPS range convention.
  std::pair<double, double> row_bounds(int i) const;

  /// Throws model_error when an invariant of the data model is violated.
  void validate() const;

  bool operator==(const instance_t&) const = default;
};

/// "name m n #integer nnz" on one line.
std::string summary(const instance_t& inst);

enum class row_origin_t : std::uint8_t { original, cut, bound_change };

struct row_provenance_t {
  row_origin_t origin{row_origin_t::original};
  int round{0};
  int index{0};
  bool operator==(const row_provenance_t&) const = default;
};

/// LP relaxation in activity-bound form: `row_lower <= A x <= row_upper`,
/// `lower <= x <= upper`. Integrality is kept as an annotation only.
struct lp_relaxation_t {
  std::string name;
  std::vector<sparse_vector_t> rows;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<row_provenance_t> provenance;
  std::vector<double> objective;
  double objective_offset{0.0};
  obj_sense_t obj_sense{obj_sense_t::minimize};
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> is_integer;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const { return static_cast<int>(objective.size()); }

  void append_row(sparse_vector_t row, double lo, double up, row_provenance_t prov);

  /// Objective value in the instance's own sense.
  double objective_value(const std::vector<double>& x) const;
};

lp_relaxation_t relax(const instance_t& inst);

instance_t parse_mps(std::istream& in);
instance_t parse_mps(std::string_view text);
instance_t read_mps_file(const std::string& path);

/// Free-format MPS that parse_mps reads back into an identical instance.
void write_mps(std::ostream& out, const instance_t& inst);
std::string write_mps(const instance_t& inst);

}  // namespace kscope
