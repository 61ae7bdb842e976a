/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/lu_factors.hpp>

#include <cmath>
#include <numeric>
#include <utility>

namespace kscope {

lu_factors_t lu_factors_t::factorize(const dense_matrix_t& B, double pivot_tolerance)
{
  const int m = B.rows();
  lu_factors_t f;
  f.m_         = m;
  f.pivot_tol_ = pivot_tolerance;
  f.lu_.resize(std::size_t(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      f.lu_[std::size_t(i) * m + j] = B(i, j);
    }
  }
  f.row_perm_.resize(m);
  f.col_perm_.resize(m);
  std::iota(f.row_perm_.begin(), f.row_perm_.end(), 0);
  std::iota(f.col_perm_.begin(), f.col_perm_.end(), 0);

  auto a = [&](int i, int j) -> double& { return f.lu_[std::size_t(i) * m + j]; };
  const double threshold = pivot_tolerance * B.max_abs();

  for (int k = 0; k < m; ++k) {
    int pr     = k;
    int pc     = k;
    double big = -1.0;
    for (int i = k; i < m; ++i) {
      for (int j = k; j < m; ++j) {
        const double v = std::abs(a(i, j));
        if (v > big) {
          big = v;
          pr  = i;
          pc  = j;
        }
      }
    }
    if (!(big > threshold) || big == 0.0) { throw singular_basis_error(k); }
    if (pr != k) {
      for (int j = 0; j < m; ++j) {
        std::swap(a(k, j), a(pr, j));
      }
      std::swap(f.row_perm_[k], f.row_perm_[pr]);
    }
    if (pc != k) {
      for (int i = 0; i < m; ++i) {
        std::swap(a(i, k), a(i, pc));
      }
      std::swap(f.col_perm_[k], f.col_perm_[pc]);
    }
    const double pivot = a(k, k);
    for (int i = k + 1; i < m; ++i) {
      double& lik = a(i, k);
      if (lik == 0.0) { continue; }
      lik /= pivot;
      for (int j = k + 1; j < m; ++j) {
        a(i, j) -= lik * a(k, j);
      }
    }
  }
  return f;
}

void lu_factors_t::ftran(std::span<double> x) const
{
  const int m = m_;
  std::vector<double> w(m);
  for (int k = 0; k < m; ++k) {
    w[k] = x[row_perm_[k]];
  }
  // L w = P a
  for (int i = 1; i < m; ++i) {
    const double* row = &lu_[std::size_t(i) * m];
    double s          = w[i];
    for (int k = 0; k < i; ++k) {
      s -= row[k] * w[k];
    }
    w[i] = s;
  }
  // U v = w
  for (int i = m - 1; i >= 0; --i) {
    const double* row = &lu_[std::size_t(i) * m];
    double s          = w[i];
    for (int k = i + 1; k < m; ++k) {
      s -= row[k] * w[k];
    }
    w[i] = s / row[i];
  }
  for (int k = 0; k < m; ++k) {
    x[col_perm_[k]] = w[k];
  }
  for (const auto& eta : etas_) {
    const double xr = x[eta.position] / eta.pivot;
    for (std::size_t p = 0; p < eta.index.size(); ++p) {
      x[eta.index[p]] -= eta.value[p] * xr;
    }
    x[eta.position] = xr;
  }
}

void lu_factors_t::btran(std::span<double> y) const
{
  const int m = m_;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = y[it->position];
    for (std::size_t p = 0; p < it->index.size(); ++p) {
      s -= it->value[p] * y[it->index[p]];
    }
    y[it->position] = s / it->pivot;
  }
  std::vector<double> w(m);
  for (int k = 0; k < m; ++k) {
    w[k] = y[col_perm_[k]];
  }
  // U^T w' = Q^T c
  for (int i = 0; i < m; ++i) {
    double s = w[i];
    for (int k = 0; k < i; ++k) {
      s -= lu_[std::size_t(k) * m + i] * w[k];
    }
    w[i] = s / lu_[std::size_t(i) * m + i];
  }
  // L^T v = w'
  for (int i = m - 1; i >= 0; --i) {
    double s = w[i];
    for (int k = i + 1; k < m; ++k) {
      s -= lu_[std::size_t(k) * m + i] * w[k];
    }
    w[i] = s;
  }
  for (int k = 0; k < m; ++k) {
    y[row_perm_[k]] = w[k];
  }
}

void lu_factors_t::replace_column(int position, std::span<const double> alpha)
{
  eta_t eta;
  eta.position = position;
  eta.pivot    = alpha[position];
  if (std::abs(eta.pivot) == 0.0) { throw singular_basis_error(position); }
  for (int i = 0; i < m_; ++i) {
    if (i != position && alpha[i] != 0.0) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

dense_matrix_t lu_factors_t::lower() const
{
  dense_matrix_t L(m_, m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < i; ++j) {
      L(i, j) = lu_[std::size_t(i) * m_ + j];
    }
    L(i, i) = 1.0;
  }
  return L;
}

dense_matrix_t lu_factors_t::upper() const
{
  dense_matrix_t U(m_, m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = i; j < m_; ++j) {
      U(i, j) = lu_[std::size_t(i) * m_ + j];
    }
  }
  return U;
}

}  // namespace kscope
