/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/cuts.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kscope {

const char* to_string(cut_verdict_t v)
{
  switch (v) {
    case cut_verdict_t::pending: return "Pending";
    case cut_verdict_t::accepted: return "Accepted";
    case cut_verdict_t::rejected_dynamism: return "RejectedDynamism";
    case cut_verdict_t::rejected_parallel: return "RejectedParallel";
    case cut_verdict_t::rejected_weak: return "RejectedWeak";
    case cut_verdict_t::rejected_limit: return "RejectedLimit";
  }
  return "Unknown";
}

double gmi_coefficient(double row_coef, double f0, bool integer_var)
{
  if (integer_var) {
    const double f = row_coef - std::floor(row_coef);
    return f <= f0 ? f / f0 : (1.0 - f) / (1.0 - f0);
  }
  return row_coef >= 0.0 ? row_coef / f0 : -row_coef / (1.0 - f0);
}

namespace {

bool is_integral(double v) { return std::isfinite(v) && v == std::round(v); }

}  // namespace

std::vector<cut_candidate_t> generate_gomory(const lp_relaxation_t& lp,
                                             const lp_solution_t& sol,
                                             int round,
                                             const cut_options_t& opts)
{
  std::vector<cut_candidate_t> out;
  if (sol.status != lp_status_t::optimal || !sol.factors) { return out; }
  const int n = lp.num_cols();
  const int m = lp.num_rows();

  auto lower = [&](int k) { return k < n ? lp.lower[k] : -lp.row_upper[k - n]; };
  auto upper = [&](int k) { return k < n ? lp.upper[k] : -lp.row_lower[k - n]; };

  std::vector<sparse_vector_t> cols(n);
  for (int i = 0; i < m; ++i) {
    const auto& r = lp.rows[i];
    for (std::size_t k = 0; k < r.size(); ++k) {
      cols[r.index[k]].push_back(i, r.value[k]);
    }
  }

  std::vector<double> rho(m);
  std::vector<double> gz(n + m);
  std::vector<double> pi(n);
  for (int p = 0; p < m; ++p) {
    const int j = sol.basis.columns[p];
    if (j >= n || !lp.is_integer[j]) { continue; }
    const double value = sol.x[j];
    const double f0    = value - std::floor(value);
    if (f0 < opts.tol_int || f0 > 1.0 - opts.tol_int) { continue; }

    std::fill(rho.begin(), rho.end(), 0.0);
    rho[p] = 1.0;
    sol.factors->btran(rho);

    // Row: z_j + sum_k abar_k z_k = 0 over nonbasic k. Complementing each
    // nonbasic against its active bound gives z_j + sum_k ahat_k t_k = value.
    std::fill(gz.begin(), gz.end(), 0.0);
    double rhs  = 1.0;
    bool usable = true;
    for (int k = 0; k < n + m && usable; ++k) {
      const auto st = sol.basis.status[k];
      if (st == var_status_t::basic) { continue; }
      const double abar = k < n ? cols[k].dot(rho) : rho[k - n];
      if (std::abs(abar) < 1e-12) { continue; }
      const double lo = lower(k);
      const double up = upper(k);
      if (lo == up) { continue; }
      if (st == var_status_t::at_zero) {
        usable = false;
        break;
      }
      const bool at_lower = st == var_status_t::at_lower;
      const double ahat   = at_lower ? abar : -abar;
      const double bound  = at_lower ? lo : up;
      const bool integer  = k < n && lp.is_integer[k] && is_integral(bound);
      const double gamma  = gmi_coefficient(ahat, f0, integer);
      if (gamma == 0.0) { continue; }
      if (at_lower) {
        gz[k] += gamma;
        rhs += gamma * lo;
      } else {
        gz[k] -= gamma;
        rhs -= gamma * up;
      }
    }
    if (!usable) { continue; }

    // Logical s_i = -a_i x.
    std::copy(gz.begin(), gz.begin() + n, pi.begin());
    for (int i = 0; i < m; ++i) {
      const double g = gz[n + i];
      if (g == 0.0) { continue; }
      const auto& r = lp.rows[i];
      for (std::size_t k = 0; k < r.size(); ++k) {
        pi[r.index[k]] -= g * r.value[k];
      }
    }

    cut_candidate_t cut;
    for (int k = 0; k < n; ++k) {
      const double c = pi[k];
      if (c == 0.0) { continue; }
      if (std::abs(c) < opts.coef_drop) {
        // Drop the term and relax the rhs by its largest possible value.
        const double worst = std::max(c * lp.lower[k], c * lp.upper[k]);
        if (std::isfinite(worst)) {
          rhs -= worst;
          continue;
        }
      }
      cut.coeffs.push_back(k, c);
    }
    const double norm = cut.coeffs.norm2();
    if (norm == 0.0) { continue; }
    cut.rhs        = rhs;
    cut.source_var = j;
    cut.round      = round;
    cut.efficacy   = cut.violation(sol.x) / norm;
    cut.dynamism   = dynamism(cut.coeffs);
    if (!(cut.efficacy > 0.0)) { continue; }
    out.push_back(std::move(cut));
  }
  return out;
}

double parallelism(const sparse_vector_t& a, const sparse_vector_t& b)
{
  const double na = a.norm2();
  const double nb = b.norm2();
  if (na == 0.0 || nb == 0.0) { return 0.0; }
  double dot     = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  // Both index lists are ascending.
  while (ia < a.size() && ib < b.size()) {
    if (a.index[ia] == b.index[ib]) {
      dot += a.value[ia++] * b.value[ib++];
    } else if (a.index[ia] < b.index[ib]) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return std::abs(dot) / (na * nb);
}

double dynamism(const sparse_vector_t& coeffs)
{
  double big   = 0.0;
  double small = inf;
  for (double v : coeffs.value) {
    const double a = std::abs(v);
    if (a == 0.0) { continue; }
    big   = std::max(big, a);
    small = std::min(small, a);
  }
  return big == 0.0 ? 1.0 : big / small;
}

std::vector<cut_candidate_t> score_and_filter(std::vector<cut_candidate_t>& candidates,
                                              std::span<const cut_candidate_t> accepted_so_far,
                                              const cut_options_t& opts)
{
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = candidates[a];
    const auto& cb = candidates[b];
    if (ca.efficacy != cb.efficacy) { return ca.efficacy > cb.efficacy; }
    return ca.source_var < cb.source_var;
  });

  std::vector<cut_candidate_t> accepted;
  for (std::size_t idx : order) {
    auto& cand    = candidates[idx];
    cand.dynamism = dynamism(cand.coeffs);
    double par    = 0.0;
    for (const auto& prev : accepted_so_far) {
      par = std::max(par, parallelism(cand.coeffs, prev.coeffs));
    }
    for (const auto& prev : accepted) {
      par = std::max(par, parallelism(cand.coeffs, prev.coeffs));
    }
    cand.parallelism_max = par;
    if (cand.dynamism > opts.max_dynamism) {
      cand.verdict = cut_verdict_t::rejected_dynamism;
    } else if (cand.efficacy < opts.min_efficacy) {
      cand.verdict = cut_verdict_t::rejected_weak;
    } else if (par > opts.max_parallelism) {
      cand.verdict = cut_verdict_t::rejected_parallel;
    } else if (static_cast<int>(accepted.size()) >= opts.max_cuts_per_round) {
      cand.verdict = cut_verdict_t::rejected_limit;
    } else {
      cand.verdict = cut_verdict_t::accepted;
      accepted.push_back(cand);
    }
  }
  return accepted;
}

void apply_cuts(lp_relaxation_t& lp,
                basis_t& basis,
                std::span<const cut_candidate_t> accepted,
                int round)
{
  extend_basis(basis, lp);
  for (std::size_t k = 0; k < accepted.size(); ++k) {
    const auto& cut = accepted[k];
    lp.append_row(cut.coeffs, cut.rhs, inf,
                  row_provenance_t{row_origin_t::cut, round, static_cast<int>(k)});
  }
  extend_basis(basis, lp);
}

}  // namespace kscope
