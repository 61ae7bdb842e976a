/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/dense_matrix.hpp>
#include <kscope/lu_factors.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

namespace kscope {

struct power_options_t {
  double tolerance{1e-10};  // relative change of the Rayleigh quotient
  int max_iterations{10000};
  std::uint64_t restart_seed{0x9e3779b97f4a7c15ULL};
};

struct singular_value_estimate_t {
  double value{0.0};
  int iterations{0};
  bool converged{false};
};

/// 2-norm condition number kappa = sigma_max / sigma_min of a basis matrix.
struct condition_estimate_t {
  double sigma_max{0.0};
  double sigma_min{0.0};
  double kappa{0.0};
  int iters_max{0};
  int iters_min{0};
  bool converged{false};
};

class zero_matrix_error : public std::runtime_error {
 public:
  zero_matrix_error() : std::runtime_error("ZeroMatrix: power iteration products vanish") {}
};

/// y = op(x) for a square operator and its transpose.
struct linear_operator_t {
  int dim{0};
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::function<void(std::span<const double>, std::span<double>)> apply_transpose;

  static linear_operator_t from_matrix(const dense_matrix_t& B);
};

/// Largest singular value by power iteration on B^T B.
///
/// Starts from the normalized all-ones vector. When the first Rayleigh
/// quotient is exactly zero the iteration restarts once from a fixed
/// pseudorandom vector; a second zero raises zero_matrix_error.
singular_value_estimate_t estimate_sigma_max(const linear_operator_t& B,
                                             const power_options_t& opts = {});

/// Smallest singular value by power iteration on B^{-T} B^{-1}, one ftran and
/// one btran per step.
singular_value_estimate_t estimate_sigma_min(const lu_factors_t& lu,
                                             const power_options_t& opts = {});

condition_estimate_t kappa2(const linear_operator_t& B,
                            const lu_factors_t& lu,
                            const power_options_t& opts = {});
condition_estimate_t kappa2(const dense_matrix_t& B,
                            const lu_factors_t& lu,
                            const power_options_t& opts = {});

}  // namespace kscope
