/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/simplex.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace kscope {

const char* to_string(lp_status_t s)
{
  switch (s) {
    case lp_status_t::optimal: return "Optimal";
    case lp_status_t::infeasible: return "Infeasible";
    case lp_status_t::unbounded: return "Unbounded";
    case lp_status_t::iteration_limit: return "IterationLimit";
    case lp_status_t::numerical_failure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

var_status_t resting_status(double lo, double up)
{
  if (lo > -inf) { return var_status_t::at_lower; }
  if (up < inf) { return var_status_t::at_upper; }
  return var_status_t::at_zero;
}

// Structural columns of A, built once per solve.
std::vector<sparse_vector_t> column_view(const lp_relaxation_t& lp)
{
  std::vector<sparse_vector_t> cols(lp.num_cols());
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows[i];
    for (std::size_t k = 0; k < r.size(); ++k) {
      cols[r.index[k]].push_back(i, r.value[k]);
    }
  }
  return cols;
}

}  // namespace

basis_t slack_basis(const lp_relaxation_t& lp)
{
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  basis_t b;
  b.columns.resize(m);
  b.status.resize(n + m, var_status_t::basic);
  for (int i = 0; i < m; ++i) {
    b.columns[i] = n + i;
  }
  for (int j = 0; j < n; ++j) {
    b.status[j] = resting_status(lp.lower[j], lp.upper[j]);
  }
  return b;
}

void extend_basis(basis_t& basis, const lp_relaxation_t& lp)
{
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  for (int i = basis.num_rows(); i < m; ++i) {
    basis.columns.push_back(n + i);
    basis.status.push_back(var_status_t::basic);
  }
}

dense_matrix_t assemble_basis(const lp_relaxation_t& lp, const std::vector<int>& columns)
{
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  dense_matrix_t B(m, m);
  std::vector<int> position(n + m, -1);
  for (int p = 0; p < m; ++p) {
    position[columns[p]] = p;
  }
  for (int i = 0; i < m; ++i) {
    const auto& r = lp.rows[i];
    for (std::size_t k = 0; k < r.size(); ++k) {
      const int p = position[r.index[k]];
      if (p >= 0) { B(i, p) = r.value[k]; }
    }
    const int ps = position[n + i];
    if (ps >= 0) { B(i, ps) = 1.0; }
  }
  return B;
}

namespace {

class primal_simplex_t {
 public:
  primal_simplex_t(const lp_relaxation_t& lp,
                   const simplex_options_t& opts,
                   const iteration_observer_t& observer)
    : lp_(lp),
      opts_(opts),
      observer_(observer),
      n_(lp.num_cols()),
      m_(lp.num_rows()),
      cols_(column_view(lp))
  {
    const int total = n_ + m_;
    lo_.resize(total);
    up_.resize(total);
    cost_.assign(total, 0.0);
    const double sign = lp.obj_sense == obj_sense_t::maximize ? -1.0 : 1.0;
    for (int j = 0; j < n_; ++j) {
      lo_[j]   = lp.lower[j];
      up_[j]   = lp.upper[j];
      cost_[j] = sign * lp.objective[j];
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = -lp.row_upper[i];
      up_[n_ + i] = -lp.row_lower[i];
    }
  }

  lp_solution_t run(const basis_t& start)
  {
    if (!install(start)) {
      if (!install(slack_basis(lp_))) { return finish(lp_status_t::numerical_failure); }
    }
    notify(primal_infeasible() ? 1 : 2);

    int degenerate_run  = 0;
    int clean_checks    = 0;
    std::vector<double> alpha(m_);
    std::vector<double> y(m_);

    while (true) {
      if (iterations_ >= opts_.max_iterations) { return finish(lp_status_t::iteration_limit); }

      const bool infeasible = primal_infeasible();
      const int phase       = infeasible ? 1 : 2;
      price(phase, y);

      const bool bland = degenerate_run >= opts_.bland_after_degenerate;
      int entering     = -1;
      double dir       = 0.0;
      double best      = 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        if (basis_.status[j] == var_status_t::basic || lo_[j] == up_[j]) { continue; }
        const double d = reduced_cost(j, phase, y);
        double dj      = 0.0;
        switch (basis_.status[j]) {
          case var_status_t::at_lower: dj = d < -opts_.tol_opt ? 1.0 : 0.0; break;
          case var_status_t::at_upper: dj = d > opts_.tol_opt ? -1.0 : 0.0; break;
          case var_status_t::at_zero:
            dj = d < -opts_.tol_opt ? 1.0 : (d > opts_.tol_opt ? -1.0 : 0.0);
            break;
          default: break;
        }
        if (dj == 0.0) { continue; }
        if (bland) {
          entering = j;
          dir      = dj;
          break;
        }
        if (std::abs(d) > best) {
          best     = std::abs(d);
          entering = j;
          dir      = dj;
        }
      }

      if (entering < 0) {
        // Confirm the verdict on fresh factors before reporting it.
        if (lu_->num_updates() > 0 && clean_checks < 3) {
          ++clean_checks;
          if (!refactor()) { return finish(lp_status_t::numerical_failure); }
          continue;
        }
        return finish(infeasible ? lp_status_t::infeasible : lp_status_t::optimal);
      }

      load_column(entering, alpha);
      lu_->ftran(alpha);
      if (!residual_ok(entering, alpha) && lu_->num_updates() > 0) {
        if (!refactor()) { return finish(lp_status_t::numerical_failure); }
        continue;
      }

      const auto step = ratio_test(entering, dir, alpha, phase);
      if (!step) {
        return finish(phase == 2 ? lp_status_t::unbounded : lp_status_t::numerical_failure);
      }
      const double t = step->ratio;
      x_[entering] += dir * t;
      for (int p = 0; p < m_; ++p) {
        x_[basis_.columns[p]] -= dir * alpha[p] * t;
      }
      if (step->position < 0) {
        basis_.status[entering] = dir > 0 ? var_status_t::at_upper : var_status_t::at_lower;
        x_[entering]            = dir > 0 ? up_[entering] : lo_[entering];
      } else {
        const int r       = step->position;
        const int leaving = basis_.columns[r];
        basis_.status[leaving] = step->to_upper ? var_status_t::at_upper : var_status_t::at_lower;
        x_[leaving]            = step->to_upper ? up_[leaving] : lo_[leaving];
        basis_.columns[r]       = entering;
        basis_.status[entering] = var_status_t::basic;
        if (lu_->num_updates() + 1 >= opts_.refactor_interval) {
          if (!refactor()) { return finish(lp_status_t::numerical_failure); }
        } else {
          lu_->replace_column(r, alpha);
        }
      }
      degenerate_run = t <= 1e-12 ? degenerate_run + 1 : 0;
      clean_checks   = 0;
      ++iterations_;
      if (phase == 1) { ++phase1_iterations_; }
      notify(phase);
    }
  }

 private:
  struct step_t {
    double ratio;
    int position;  // -1 for a bound flip of the entering variable
    bool to_upper;
  };

  double feas_tol(double bound) const
  {
    return opts_.tol_feas * std::max(1.0, std::abs(bound));
  }

  bool below(int j) const { return x_[j] < lo_[j] - feas_tol(lo_[j]); }
  bool above(int j) const { return x_[j] > up_[j] + feas_tol(up_[j]); }

  bool primal_infeasible() const
  {
    for (int p = 0; p < m_; ++p) {
      const int j = basis_.columns[p];
      if (below(j) || above(j)) { return true; }
    }
    return false;
  }

  double nonbasic_value(int j) const
  {
    switch (basis_.status[j]) {
      case var_status_t::at_lower: return lo_[j];
      case var_status_t::at_upper: return up_[j];
      default: return 0.0;
    }
  }

  void load_column(int j, std::vector<double>& a) const
  {
    std::fill(a.begin(), a.end(), 0.0);
    if (j < n_) {
      const auto& c = cols_[j];
      for (std::size_t k = 0; k < c.size(); ++k) {
        a[c.index[k]] = c.value[k];
      }
    } else {
      a[j - n_] = 1.0;
    }
  }

  double column_dot(int j, const std::vector<double>& y) const
  {
    if (j >= n_) { return y[j - n_]; }
    return cols_[j].dot(y);
  }

  bool install(const basis_t& start)
  {
    basis_ = start;
    if (basis_.num_rows() <= m_) { extend_basis(basis_, lp_); }
    if (basis_.status.size() != static_cast<std::size_t>(n_ + m_) ||
        basis_.num_rows() != m_) {
      basis_ = slack_basis(lp_);
    }
    int basic_count = 0;
    for (int j = 0; j < n_ + m_; ++j) {
      auto& s = basis_.status[j];
      switch (s) {
        case var_status_t::basic: ++basic_count; break;
        case var_status_t::at_lower:
          if (lo_[j] == -inf) { s = resting_status(lo_[j], up_[j]); }
          break;
        case var_status_t::at_upper:
          if (up_[j] == inf) { s = resting_status(lo_[j], up_[j]); }
          break;
        case var_status_t::at_zero:
          if (lo_[j] > -inf || up_[j] < inf) { s = resting_status(lo_[j], up_[j]); }
          break;
      }
    }
    if (basic_count != m_) { return false; }
    x_.assign(n_ + m_, 0.0);
    return refactor();
  }

  bool refactor()
  {
    try {
      lu_ = std::make_shared<lu_factors_t>(
        lu_factors_t::factorize(assemble_basis(lp_, basis_.columns)));
    } catch (const singular_basis_error&) {
      return false;
    }
    compute_primal();
    return true;
  }

  // x_B = -B^{-1} N x_N since [A | I] z = 0.
  void compute_primal()
  {
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
      if (basis_.status[j] == var_status_t::basic) { continue; }
      const double v = nonbasic_value(j);
      x_[j]          = v;
      if (v == 0.0) { continue; }
      if (j < n_) {
        const auto& c = cols_[j];
        for (std::size_t k = 0; k < c.size(); ++k) {
          rhs[c.index[k]] -= c.value[k] * v;
        }
      } else {
        rhs[j - n_] -= v;
      }
    }
    lu_->ftran(rhs);
    for (int p = 0; p < m_; ++p) {
      x_[basis_.columns[p]] = rhs[p];
    }
  }

  void price(int phase, std::vector<double>& y) const
  {
    for (int p = 0; p < m_; ++p) {
      const int j = basis_.columns[p];
      if (phase == 2) {
        y[p] = cost_[j];
      } else {
        y[p] = below(j) ? -1.0 : (above(j) ? 1.0 : 0.0);
      }
    }
    lu_->btran(y);
  }

  double reduced_cost(int j, int phase, const std::vector<double>& y) const
  {
    const double c = phase == 2 ? cost_[j] : 0.0;
    return c - column_dot(j, y);
  }

  bool residual_ok(int j, const std::vector<double>& alpha) const
  {
    std::vector<double> a(m_);
    load_column(j, a);
    double amax = 0.0;
    for (double v : a) {
      amax = std::max(amax, std::abs(v));
    }
    for (int p = 0; p < m_; ++p) {
      const int b = basis_.columns[p];
      if (alpha[p] == 0.0) { continue; }
      if (b < n_) {
        const auto& c = cols_[b];
        for (std::size_t k = 0; k < c.size(); ++k) {
          a[c.index[k]] -= c.value[k] * alpha[p];
        }
      } else {
        a[b - n_] -= alpha[p];
      }
    }
    double res = 0.0;
    for (double v : a) {
      res = std::max(res, std::abs(v));
    }
    return res <= opts_.residual_tolerance * (1.0 + amax);
  }

  std::optional<step_t> ratio_test(int q, double dir, const std::vector<double>& alpha, int phase)
    const
  {
    std::optional<step_t> best;
    int best_var = 0;
    auto consider = [&](double ratio, int position, bool to_upper, int var) {
      ratio = std::max(ratio, 0.0);
      if (!best || ratio < best->ratio - 1e-12 ||
          (ratio <= best->ratio + 1e-12 && var < best_var)) {
        best     = step_t{ratio, position, to_upper};
        best_var = var;
      }
    };
    if (lo_[q] > -inf && up_[q] < inf) { consider(up_[q] - lo_[q], -1, dir > 0, q); }
    for (int p = 0; p < m_; ++p) {
      if (std::abs(alpha[p]) <= opts_.tol_pivot) { continue; }
      const int b       = basis_.columns[p];
      const double rate = -dir * alpha[p];
      const double xb   = x_[b];
      if (phase == 1 && below(b)) {
        if (rate > 0) { consider((lo_[b] - xb) / rate, p, false, b); }
      } else if (phase == 1 && above(b)) {
        if (rate < 0) { consider((xb - up_[b]) / -rate, p, true, b); }
      } else if (rate < 0) {
        if (lo_[b] > -inf) { consider((xb - lo_[b]) / -rate, p, false, b); }
      } else {
        if (up_[b] < inf) { consider((up_[b] - xb) / rate, p, true, b); }
      }
    }
    return best;
  }

  double user_objective() const
  {
    double z = lp_.objective_offset;
    for (int j = 0; j < n_; ++j) {
      z += lp_.objective[j] * x_[j];
    }
    return z;
  }

  void notify(int phase) const
  {
    if (!observer_) { return; }
    observer_(iteration_info_t{iterations_, phase, user_objective(), lp_, basis_, *lu_});
  }

  lp_solution_t finish(lp_status_t status)
  {
    lp_solution_t sol;
    sol.status            = status;
    sol.iterations        = iterations_;
    sol.phase1_iterations = phase1_iterations_;
    sol.basis             = basis_;
    sol.factors           = lu_;
    if (x_.size() == static_cast<std::size_t>(n_ + m_)) {
      sol.x.assign(x_.begin(), x_.begin() + n_);
      sol.slacks.assign(x_.begin() + n_, x_.end());
      sol.objective = user_objective();
    }
    if (lu_) {
      std::vector<double> y(m_);
      price(2, y);
      const double sign = lp_.obj_sense == obj_sense_t::maximize ? -1.0 : 1.0;
      for (double& v : y) {
        v *= sign;
      }
      sol.y = std::move(y);
    }
    return sol;
  }

  const lp_relaxation_t& lp_;
  const simplex_options_t& opts_;
  const iteration_observer_t& observer_;
  int n_;
  int m_;
  std::vector<sparse_vector_t> cols_;
  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<double> cost_;
  basis_t basis_;
  std::vector<double> x_;
  std::shared_ptr<lu_factors_t> lu_;
  int iterations_{0};
  int phase1_iterations_{0};
};

}  // namespace

lp_solution_t solve_primal(const lp_relaxation_t& lp,
                           const basis_t& start,
                           const simplex_options_t& opts,
                           const iteration_observer_t& observer)
{
  primal_simplex_t solver(lp, opts, observer);
  return solver.run(start.empty() && lp.num_rows() > 0 ? slack_basis(lp) : start);
}

lp_solution_t solve_primal(const lp_relaxation_t& lp, const simplex_options_t& opts)
{
  return solve_primal(lp, slack_basis(lp), opts, {});
}

}  // namespace kscope
