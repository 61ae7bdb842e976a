/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/conditioning.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace kscope {

namespace {

double norm2(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  return std::sqrt(s);
}

std::vector<double> ones_start(int m)
{
  return std::vector<double>(m, 1.0 / std::sqrt(static_cast<double>(m)));
}

std::vector<double> pseudorandom_start(int m, std::uint64_t seed)
{
  // splitmix64; fixed so the restart vector is identical on every platform.
  std::vector<double> v(m);
  std::uint64_t state = seed;
  for (int i = 0; i < m; ++i) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z               = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z               = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z               = z ^ (z >> 31);
    v[i]            = static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  const double n = norm2(v);
  for (double& x : v) {
    x /= n;
  }
  return v;
}

struct rq_result_t {
  double rq{0.0};
  int iterations{0};
  bool converged{false};
};

// Power iteration on G = op^T op. `forward` maps v -> op v and `backward`
// maps w -> op^T w, both in place.
template <typename Forward, typename Backward>
rq_result_t power_iterate(int m,
                          std::vector<double> v,
                          Forward&& forward,
                          Backward&& backward,
                          const power_options_t& opts)
{
  rq_result_t out;
  std::vector<double> w(m);
  double prev = 0.0;
  for (int k = 1; k <= opts.max_iterations; ++k) {
    w = v;
    forward(w);
    // v has unit norm so ||op v||^2 is the Rayleigh quotient of G.
    double rq = 0.0;
    for (double x : w) {
      rq += x * x;
    }
    double vv = 0.0;
    for (double x : v) {
      vv += x * x;
    }
    rq /= vv;
    out.rq         = rq;
    out.iterations = k;
    if (rq == 0.0) { return out; }
    if (k > 1 && std::abs(rq - prev) <= opts.tolerance * rq) {
      out.converged = true;
      return out;
    }
    prev = rq;
    backward(w);
    const double n = norm2(w);
    if (n == 0.0 || !std::isfinite(n)) { return out; }
    for (int i = 0; i < m; ++i) {
      v[i] = w[i] / n;
    }
  }
  return out;
}

template <typename Forward, typename Backward>
rq_result_t power_with_restart(int m,
                               Forward&& forward,
                               Backward&& backward,
                               const power_options_t& opts)
{
  auto res = power_iterate(m, ones_start(m), forward, backward, opts);
  if (res.rq == 0.0) {
    const int spent = res.iterations;
    res             = power_iterate(m, pseudorandom_start(m, opts.restart_seed), forward, backward,
                        opts);
    res.iterations += spent;
    if (res.rq == 0.0) { throw zero_matrix_error(); }
  }
  return res;
}

}  // namespace

linear_operator_t linear_operator_t::from_matrix(const dense_matrix_t& B)
{
  linear_operator_t op;
  op.dim   = B.rows();
  op.apply = [&B](std::span<const double> x, std::span<double> y) { B.multiply(x, y); };
  op.apply_transpose = [&B](std::span<const double> x, std::span<double> y) {
    B.multiply_transpose(x, y);
  };
  return op;
}

singular_value_estimate_t estimate_sigma_max(const linear_operator_t& B, const power_options_t& opts)
{
  const int m = B.dim;
  if (m == 0) { throw zero_matrix_error(); }
  std::vector<double> tmp(m);
  auto forward = [&](std::vector<double>& x) {
    B.apply(x, tmp);
    x.swap(tmp);
  };
  auto backward = [&](std::vector<double>& x) {
    B.apply_transpose(x, tmp);
    x.swap(tmp);
  };
  const auto res = power_with_restart(m, forward, backward, opts);
  return {std::sqrt(res.rq), res.iterations, res.converged};
}

singular_value_estimate_t estimate_sigma_min(const lu_factors_t& lu, const power_options_t& opts)
{
  const int m = lu.dim();
  if (m == 0) { throw zero_matrix_error(); }
  auto forward  = [&](std::vector<double>& x) { lu.ftran(x); };
  auto backward = [&](std::vector<double>& x) { lu.btran(x); };
  const auto res = power_with_restart(m, forward, backward, opts);
  return {1.0 / std::sqrt(res.rq), res.iterations, res.converged};
}

condition_estimate_t kappa2(const linear_operator_t& B,
                            const lu_factors_t& lu,
                            const power_options_t& opts)
{
  const auto smax = estimate_sigma_max(B, opts);
  const auto smin = estimate_sigma_min(lu, opts);
  condition_estimate_t out;
  out.sigma_max = smax.value;
  out.sigma_min = smin.value;
  // clamp: both estimates lie inside the spectrum
  out.kappa     = std::max(1.0, smax.value / smin.value);
  out.iters_max = smax.iterations;
  out.iters_min = smin.iterations;
  out.converged = smax.converged && smin.converged;
  return out;
}

condition_estimate_t kappa2(const dense_matrix_t& B,
                            const lu_factors_t& lu,
                            const power_options_t& opts)
{
  return kappa2(linear_operator_t::from_matrix(B), lu, opts);
}

}  // namespace kscope
