// SPDX-License-Identifier: Apache-2.0
//
// xlma: placement optimization and simulation for movable-subarray uplinks
// Copyright (C) 2026 The xlma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "xlma/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "xlma/common.hpp"

namespace xlma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotEps = 1e-12;

// Equality-form system  A v = b,  0 <= v <= upper,  with one artificial
// column per row appended after the real columns.
class BoundedSimplex {
 public:
  BoundedSimplex(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> upper)
      : m_(static_cast<int>(a.size())), n_real_(static_cast<int>(upper.size())), a_(std::move(a)), b_(std::move(b)) {
    n_ = n_real_ + m_;
    upper_ = std::move(upper);
    upper_.resize(n_, kInf);
    at_upper_.assign(n_, false);
    basic_row_.assign(n_, -1);
    tab_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_real_; ++j) tab_[i * n_ + j] = a_[i][j];
      tab_[i * n_ + n_real_ + i] = 1.0;
      basis_.push_back(n_real_ + i);
      basic_row_[n_real_ + i] = i;
      value_.push_back(b_[i]);
    }
  }

  // Phase 1: drive the artificials to zero. Returns the remaining infeasibility.
  double phase_one() {
    std::vector<double> w(n_, 0.0);
    for (int i = 0; i < m_; ++i) w[n_real_ + i] = -1.0;
    run(w, false);
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas += column_value(n_real_ + i);
    for (int i = 0; i < m_; ++i) upper_[n_real_ + i] = 0.0;
    return infeas;
  }

  void phase_two(const std::vector<double>& cost) {
    std::vector<double> w(cost);
    w.resize(n_, 0.0);
    cost_ = w;
    run(w, true);
  }

  double column_value(int j) const {
    if (basic_row_[j] >= 0) return value_[basic_row_[j]];
    return at_upper_[j] ? upper_[j] : 0.0;
  }

  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int l = 0; l < m_; ++l) s += cost_[basis_[l]] * tab_[l * n_ + n_real_ + i];
      y[i] = s;
    }
    return y;
  }

  int pivots() const { return pivots_; }

 private:
  void run(const std::vector<double>& w, bool skip_artificials) {
    double scale = 1.0;
    for (double v : w) scale = std::max(scale, std::abs(v));
    const double tol = 1e-9 * scale;
    const int limit = 50 * (n_ + m_) + 1000;
    for (int iter = 0; iter < limit; ++iter) {
      int enter = -1;
      double d_enter = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (basic_row_[j] >= 0) continue;
        if (skip_artificials && j >= n_real_) break;
        double d = w[j];
        for (int l = 0; l < m_; ++l) d -= w[basis_[l]] * tab_[l * n_ + j];
        if ((!at_upper_[j] && d > tol && upper_[j] > 0.0) || (at_upper_[j] && d < -tol)) {
          enter = j;
          d_enter = d;
          break;
        }
      }
      if (enter < 0) return;
      step(enter, d_enter > 0.0 ? 1.0 : -1.0);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

  void step(int j, double dir) {
    double t_row = kInf;
    int leave_row = -1;
    bool leave_to_upper = false;
    for (int i = 0; i < m_; ++i) {
      const double delta = -dir * tab_[i * n_ + j];
      const int var = basis_[i];
      double t;
      bool to_upper;
      if (delta < -kPivotEps) {
        t = std::max(0.0, value_[i]) / -delta;
        to_upper = false;
      } else if (delta > kPivotEps && std::isfinite(upper_[var])) {
        t = std::max(0.0, upper_[var] - value_[i]) / delta;
        to_upper = true;
      } else {
        continue;
      }
      const bool better =
          leave_row < 0 || t < t_row - 1e-12 || (t <= t_row + 1e-12 && var < basis_[leave_row]);
      if (better) {
        t_row = t;
        leave_row = i;
        leave_to_upper = to_upper;
      }
    }
    double t_best = t_row;
    if (upper_[j] <= t_row) {
      t_best = upper_[j];
      leave_row = -1;
    }
    if (!std::isfinite(t_best)) throw std::runtime_error("linear program is unbounded");
    for (int i = 0; i < m_; ++i) value_[i] += -dir * tab_[i * n_ + j] * t_best;
    if (leave_row < 0) {
      at_upper_[j] = !at_upper_[j];
      return;
    }
    const double entering_value = (at_upper_[j] ? upper_[j] : 0.0) + dir * t_best;
    const int leaving = basis_[leave_row];
    at_upper_[leaving] = leave_to_upper;
    basic_row_[leaving] = -1;
    at_upper_[j] = false;
    pivot(leave_row, j);
    basis_[leave_row] = j;
    basic_row_[j] = leave_row;
    value_[leave_row] = entering_value;
    ++pivots_;
  }

  void pivot(int r, int j) {
    double* row = &tab_[r * n_];
    const double p = row[j];
    for (int c = 0; c < n_; ++c) row[c] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* other = &tab_[i * n_];
      const double f = other[j];
      if (f == 0.0) continue;
      for (int c = 0; c < n_; ++c) other[c] -= f * row[c];
    }
  }

  int m_;
  int n_real_;
  int n_ = 0;
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<bool> at_upper_;
  std::vector<int> basis_;
  std::vector<int> basic_row_;
  std::vector<double> value_;
  std::vector<double> tab_;
  int pivots_ = 0;
};

struct Formulation {
  std::vector<std::vector<double>> a;
  std::vector<double> b, upper, cost;
};

// Columns: x (n), coverage surplus (R), then elastic slack (R) when penalized.
Formulation formulate(const LpProblem& p, bool penalized, double weight) {
  const int n = p.num_vars();
  const int rows = static_cast<int>(p.coverage.size());
  const int cols = n + rows + (penalized ? rows : 0);
  Formulation f;
  f.upper.assign(cols, kInf);
  f.cost.assign(cols, 0.0);
  for (int j = 0; j < n; ++j) {
    f.upper[j] = 1.0;
    f.cost[j] = p.c[j];
  }
  for (int r = 0; r < rows; ++r) {
    std::vector<double> row(cols, 0.0);
    for (int j = 0; j < n; ++j) row[j] = p.coverage[r][j] ? 1.0 : 0.0;
    row[n + r] = -1.0;
    if (penalized) {
      row[n + rows + r] = 1.0;
      f.cost[n + rows + r] = -weight;
    }
    f.a.push_back(std::move(row));
    f.b.push_back(1.0);
  }
  std::vector<double> card(cols, 0.0);
  for (int j = 0; j < n; ++j) card[j] = 1.0;
  f.a.push_back(std::move(card));
  f.b.push_back(static_cast<double>(p.n_select));
  return f;
}

}  // namespace

void LpProblem::validate() const {
  const int n = num_vars();
  if (n < 1) throw DomainError("linear program has no variables");
  if (n_select < 1 || n_select > n) throw DomainError("cardinality must lie in [1, number of variables]");
  for (const auto& row : coverage) {
    if (static_cast<int>(row.size()) != n) throw DomainError("coverage row has the wrong length");
  }
  for (double v : c) {
    if (!std::isfinite(v)) throw DomainError("objective coefficient is not finite");
  }
}

LpSolution solve_lp(const LpProblem& problem) {
  problem.validate();
  const int n = problem.num_vars();
  const int rows = static_cast<int>(problem.coverage.size());
  LpSolution sol;

  double cmax = 0.0;
  for (double v : problem.c) cmax = std::max(cmax, std::abs(v));
  const double weight = 1e3 * (cmax > 0.0 ? cmax : 1.0);

  Formulation f = formulate(problem, false, 0.0);
  auto simplex = std::make_unique<BoundedSimplex>(f.a, f.b, f.upper);
  if (simplex->phase_one() > 1e-9) {
    sol.penalty_fallback = true;
    sol.log.push_back("coverage rows are jointly infeasible with the cardinality row; re-solving with penalty weight " +
                      std::to_string(weight) + " per unit violation");
    f = formulate(problem, true, weight);
    simplex = std::make_unique<BoundedSimplex>(f.a, f.b, f.upper);
    if (simplex->phase_one() > 1e-9) throw std::runtime_error("penalized linear program is infeasible");
  }
  simplex->phase_two(f.cost);
  sol.pivots = simplex->pivots();

  const int cols = static_cast<int>(f.upper.size());
  std::vector<double> v(cols);
  for (int j = 0; j < cols; ++j) v[j] = simplex->column_value(j);
  sol.x.assign(v.begin(), v.begin() + n);
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += problem.c[j] * sol.x[j];
  sol.duals = simplex->duals();

  double primal = 0.0;
  for (int i = 0; i <= rows; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < cols; ++j) lhs += f.a[i][j] * v[j];
    primal = std::max(primal, std::abs(lhs - f.b[i]));
  }
  for (int j = 0; j < cols; ++j) {
    primal = std::max(primal, -v[j]);
    if (std::isfinite(f.upper[j])) primal = std::max(primal, v[j] - f.upper[j]);
  }
  sol.primal_residual = primal;

  double slack = 0.0;
  for (int j = 0; j < cols; ++j) {
    double d = f.cost[j];
    for (int i = 0; i <= rows; ++i) d -= sol.duals[i] * f.a[i][j];
    double viol = 0.0;
    if (d < 0.0) viol = std::max(0.0, v[j]) * -d;
    if (d > 0.0) viol = std::isfinite(f.upper[j]) ? std::max(0.0, f.upper[j] - v[j]) * d : d;
    slack = std::max(slack, viol);
  }
  sol.slackness_residual = slack;
  return sol;
}

std::vector<int> round_top_n(std::span<const double> x, int n) {
  if (n < 0 || n > static_cast<int>(x.size())) throw DomainError("cannot select more entries than exist");
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
  order.resize(n);
  return order;
}

}  // namespace xlma
