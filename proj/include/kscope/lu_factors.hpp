/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/dense_matrix.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kscope {

class singular_basis_error : public std::runtime_error {
 public:
  explicit singular_basis_error(int step)
    : std::runtime_error("SingularBasis: no acceptable pivot at elimination step " +
                         std::to_string(step)),
      step_(step)
  {
  }
  int step() const { return step_; }

 private:
  int step_;
};

/// LU factors of a square basis matrix, P B Q = L U, with complete pivoting,
/// followed by a product-form eta file for column replacements made since the
/// last refactorization.
class lu_factors_t {
 public:
  static constexpr double default_pivot_tolerance = 1e-11;

  /// Throws singular_basis_error when a pivot falls below
  /// `pivot_tolerance * max|B|`.
  static lu_factors_t factorize(const dense_matrix_t& B,
                                double pivot_tolerance = default_pivot_tolerance);

  int dim() const { return m_; }
  double pivot_tolerance() const { return pivot_tol_; }

  /// Solves B x = a in place.
  void ftran(std::span<double> a) const;
  /// Solves B^T y = c in place.
  void btran(std::span<double> c) const;

  /// Replaces basis column `position` by a column whose ftran image is
  /// `alpha` (i.e. alpha = B^{-1} a_q computed before the update).
  void replace_column(int position, std::span<const double> alpha);
  int num_updates() const { return static_cast<int>(etas_.size()); }

  /// Unit lower triangular L and upper triangular U, both in pivot order.
  dense_matrix_t lower() const;
  dense_matrix_t upper() const;
  const std::vector<int>& row_permutation() const { return row_perm_; }
  const std::vector<int>& col_permutation() const { return col_perm_; }

 private:
  struct eta_t {
    int position;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;  // alpha entries other than the pivot
  };

  int m_{0};
  double pivot_tol_{default_pivot_tolerance};
  std::vector<double> lu_;     // packed L (strict lower, unit diagonal) and U
  std::vector<int> row_perm_;  // pivot position k -> original row
  std::vector<int> col_perm_;  // pivot position k -> original column
  std::vector<eta_t> etas_;
};

}  // namespace kscope
