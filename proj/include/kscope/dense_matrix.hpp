/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace kscope {

/// Row-major dense matrix for the basis sizes this solver works with.
class dense_matrix_t {
 public:
  dense_matrix_t() = default;
  dense_matrix_t(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

  static dense_matrix_t identity(int m)
  {
    dense_matrix_t out(m, m);
    for (int i = 0; i < m; ++i) {
      out(i, i) = 1.0;
    }
    return out;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const
  {
    assert(static_cast<int>(x.size()) == cols_ && static_cast<int>(y.size()) == rows_);
    for (int i = 0; i < rows_; ++i) {
      const double* row = &data_[std::size_t(i) * cols_];
      double s          = 0.0;
      for (int j = 0; j < cols_; ++j) {
        s += row[j] * x[j];
      }
      y[i] = s;
    }
  }

  // y = A^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const
  {
    assert(static_cast<int>(x.size()) == rows_ && static_cast<int>(y.size()) == cols_);
    for (int j = 0; j < cols_; ++j) {
      y[j] = 0.0;
    }
    for (int i = 0; i < rows_; ++i) {
      const double* row = &data_[std::size_t(i) * cols_];
      const double xi   = x[i];
      if (xi == 0.0) { continue; }
      for (int j = 0; j < cols_; ++j) {
        y[j] += row[j] * xi;
      }
    }
  }

  dense_matrix_t operator*(const dense_matrix_t& b) const
  {
    assert(cols_ == b.rows_);
    dense_matrix_t out(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        const double a = (*this)(i, k);
        if (a == 0.0) { continue; }
        for (int j = 0; j < b.cols_; ++j) {
          out(i, j) += a * b(k, j);
        }
      }
    }
    return out;
  }

  double max_abs() const
  {
    double m = 0.0;
    for (double v : data_) {
      m = v < 0 ? (-v > m ? -v : m) : (v > m ? v : m);
    }
    return m;
  }

 private:
  int rows_{0};
  int cols_{0};
  std::vector<double> data_;
};

}  // namespace kscope
