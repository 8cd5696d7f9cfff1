// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense two-phase simplex (Bland's rule) for reference computations
// in tests and oracles. Not meant for anything beyond a few hundred
// variables.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rideshare/common.hpp"

namespace rideshare {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;  // maximize objective . x, x >= 0
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;

  int add_var(double cost) {
    objective.push_back(cost);
    for (auto& r : rows) r.push_back(0.0);
    return num_vars++;
  }

  void add_row(std::vector<double> coeffs, RowSense sense, double b) {
    coeffs.resize(num_vars, 0.0);
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(b);
  }

  // Sparse form: (variable, coefficient) pairs.
  void add_row(const std::vector<std::pair<int, double>>& terms, RowSense sense, double b) {
    std::vector<double> coeffs(num_vars, 0.0);
    for (auto [v, a] : terms) coeffs.at(v) += a;
    add_row(std::move(coeffs), sense, b);
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

namespace detail {

class Tableau {
 public:
  static constexpr double kEps = 1e-10;

  Tableau(int rows, int cols) : m_(rows), n_(cols), a_(rows + 1, std::vector<double>(cols + 1, 0.0)),
                                basis_(rows, -1) {}

  double& at(int r, int c) { return a_[r][c]; }
  double& rhs(int r) { return a_[r][n_]; }
  double& cost(int c) { return a_[m_][c]; }
  double objective() const { return a_[m_][n_]; }
  int& basis(int r) { return basis_[r]; }

  void pivot(int r, int c) {
    const double inv = 1.0 / a_[r][c];
    for (double& v : a_[r]) v *= inv;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = a_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) a_[i][j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  // Cost row holds reduced costs of a minimization; returns false when
  // unbounded.
  bool run(const std::vector<char>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (allowed[j] && a_[m_][j] < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (a_[i][enter] <= kEps) continue;
        const double ratio = a_[i][n_] / a_[i][enter];
        if (ratio < best - kEps || (ratio <= best + kEps && leave >= 0 &&
                                     basis_[i] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  // Rewrites the cost row for the cost vector c (minimization) given the
  // current basis.
  void set_costs(const std::vector<double>& c) {
    for (int j = 0; j <= n_; ++j) a_[m_][j] = j < n_ ? c[j] : 0.0;
    for (int i = 0; i < m_; ++i) {
      const double f = a_[m_][basis_[i]];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) a_[m_][j] -= f * a_[i][j];
    }
  }

 private:
  int m_;
  int n_;
  std::vector<std::vector<double>> a_;
  std::vector<int> basis_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.rows.size());
  const int nv = lp.num_vars;
  // Columns: structural, one slack/surplus per inequality, one artificial
  // per row that lacks a natural basic slack.
  std::vector<int> slack_col(m, -1);
  std::vector<int> art_col(m, -1);
  int cols = nv;
  std::vector<double> sign(m, 1.0);
  std::vector<RowSense> sense = lp.senses;
  for (int i = 0; i < m; ++i) {
    if (lp.rhs[i] < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == RowSense::kLessEqual) {
        sense[i] = RowSense::kGreaterEqual;
      } else if (sense[i] == RowSense::kGreaterEqual) {
        sense[i] = RowSense::kLessEqual;
      }
    }
    if (sense[i] != RowSense::kEqual) slack_col[i] = cols++;
  }
  for (int i = 0; i < m; ++i) {
    if (sense[i] != RowSense::kLessEqual) art_col[i] = cols++;
  }
  detail::Tableau tab(m, cols);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nv; ++j) tab.at(i, j) = sign[i] * lp.rows[i][j];
    tab.rhs(i) = sign[i] * lp.rhs[i];
    if (slack_col[i] >= 0) {
      tab.at(i, slack_col[i]) = sense[i] == RowSense::kLessEqual ? 1.0 : -1.0;
    }
    if (art_col[i] >= 0) {
      tab.at(i, art_col[i]) = 1.0;
      tab.basis(i) = art_col[i];
    } else {
      tab.basis(i) = slack_col[i];
    }
  }

  std::vector<char> allowed(cols, 1);
  std::vector<double> phase1(cols, 0.0);
  for (int i = 0; i < m; ++i) {
    if (art_col[i] >= 0) phase1[art_col[i]] = 1.0;
  }
  tab.set_costs(phase1);
  tab.run(allowed);
  LpSolution out;
  out.x.assign(nv, 0.0);
  if (-tab.objective() > 1e-7) return out;

  // Drive zero-level artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (art_col[i] < 0 || tab.basis(i) != art_col[i]) continue;
    for (int j = 0; j < cols; ++j) {
      const bool artificial = std::find(art_col.begin(), art_col.end(), j) != art_col.end();
      if (!artificial && std::abs(tab.at(i, j)) > detail::Tableau::kEps) {
        tab.pivot(i, j);
        break;
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    if (art_col[i] >= 0) allowed[art_col[i]] = 0;
  }
  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < nv; ++j) phase2[j] = -lp.objective[j];
  tab.set_costs(phase2);
  if (!tab.run(allowed)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  for (int i = 0; i < m; ++i) {
    if (tab.basis(i) < nv) out.x[tab.basis(i)] = tab.rhs(i);
  }
  out.status = LpStatus::kOptimal;
  for (int j = 0; j < nv; ++j) out.value += lp.objective[j] * out.x[j];
  return out;
}

}  // namespace rideshare
