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

// Dual subgradient solver for the node-form problem
//
//   max  sum y'
//   s.t. sum_c y'_ic <= 1                 per vehicle
//        sum_i y'_ic <= k_c p_c           per cell
//        y'_ic <= x_i(node_c) p_c z_ic    coupling, relaxed with lambda >= 0
//        x_i a route of vehicle i
//
// The Lagrangian splits into an assignment LP in y' (D1) and one longest
// path per vehicle in x (D2).

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/flow.hpp"
#include "rideshare/objective.hpp"
#include "rideshare/problem.hpp"

namespace rideshare {

struct SolverConfig {
  double gap_threshold = 1e-3;
  int max_iterations = 2000;
  double initial_step = 0.0;     // 0 selects 1 / max(p z k)
  double fast_decay_factor = 5.0;
  bool record_trace = true;
};

using Multipliers = std::vector<std::vector<double>>;  // [vehicle][cell]

struct D1Result {
  std::vector<std::vector<double>> y;  // [vehicle][cell]
  double value = 0.0;
};

// max sum (1 - lambda) y'  s.t. per-vehicle budget 1, per-cell cap k p.
// Pairs with z = 0 are held at zero.
inline D1Result solve_d1(const DispatchProblem& problem, const Multipliers& lambda) {
  const int n = problem.num_vehicles();
  const int m = problem.num_cells();
  std::vector<double> caps(m);
  for (int c = 0; c < m; ++c) caps[c] = problem.cell(c).capacity();
  TransportSolver solver(std::vector<double>(n, 1.0), caps);
  std::vector<std::pair<int, int>> index;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < m; ++c) {
      const double gain = 1.0 - lambda[i][c];
      if (gain > 0.0 && caps[c] > 0.0 && problem.z(i, c)) {
        solver.add_arc(i, c, gain);
        index.emplace_back(i, c);
      }
    }
  }
  const TransportResult flow = solver.solve();
  D1Result out;
  out.y.assign(n, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < index.size(); ++a) {
    out.y[index[a].first][index[a].second] = flow.flow[a];
  }
  out.value = flow.value;
  return out;
}

struct PathResult {
  std::vector<int> path;
  double value = 0.0;
};

// Maximum-weight source -> target path in a DAG whose edges all go from
// lower to higher node index. Ties go to the lexicographically smallest
// node sequence. Returns an empty path when the target is unreachable.
inline PathResult longest_path(int num_nodes,
                               const std::function<std::vector<int>(int)>& successors,
                               std::span<const double> weight, int source, int target) {
  const double neg = -std::numeric_limits<double>::infinity();
  std::vector<double> best(num_nodes, neg);
  std::vector<int> next(num_nodes, -1);
  best[target] = weight[target];
  for (int n = num_nodes - 1; n >= source; --n) {
    if (n == target) continue;
    for (int s : successors(n)) {
      if (s <= n) fail_invalid("longest_path: edge ", n, " -> ", s, " breaks index order");
      if (best[s] == neg) continue;
      const double cand = weight[n] + best[s];
      if (cand > best[n] || (cand == best[n] && s < next[n])) {
        best[n] = cand;
        next[n] = s;
      }
    }
  }
  PathResult out;
  if (best[source] == neg) return out;
  out.value = best[source];
  for (int cur = source; cur != -1; cur = next[cur]) {
    out.path.push_back(cur);
    if (cur == target) break;
  }
  return out;
}

struct D2Result {
  std::vector<std::vector<int>> routes;
  double value = 0.0;
};

// Per-vehicle route maximizing sum over route nodes of sum_c lambda p z.
inline D2Result solve_d2(const DispatchProblem& problem, const Multipliers& lambda) {
  const TimeExpandedGraph& g = problem.graph();
  D2Result out;
  std::vector<double> w(g.num_nodes());
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    std::fill(w.begin(), w.end(), 0.0);
    for (int c = 0; c < problem.num_cells(); ++c) {
      if (problem.z(i, c)) w[problem.cell(c).node] += lambda[i][c] * problem.cell(c).p;
    }
    PathResult best = longest_path(
        g.num_nodes(), [&](int n) { return g.vehicle_successors(i, n); }, w,
        g.start_node(i), g.sink(i));
    if (best.path.empty()) fail_invalid("vehicle ", i, " has no route to its sink");
    out.value += best.value;
    out.routes.push_back(std::move(best.path));
  }
  return out;
}

// lambda <- max(0, lambda + step (y' - x p z)).
inline void subgradient_step(const DispatchProblem& problem, Multipliers& lambda,
                             const std::vector<std::vector<double>>& y,
                             const std::vector<std::vector<int>>& routes, double step) {
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    const auto mask = route_mask(problem, routes[i]);
    for (int c = 0; c < problem.num_cells(); ++c) {
      const DemandCell& cell = problem.cell(c);
      const double bound = mask[cell.node] && problem.z(i, c) ? cell.p : 0.0;
      const double d = y[i][c] - bound;
      if (d != 0.0) lambda[i][c] = std::max(0.0, lambda[i][c] + step * d);
    }
  }
}

struct RecoveredPrimal {
  JointSolution solution;  // node form
  double value = 0.0;
};

// Best y' for fixed routes: the D1 flow restricted to route cells with
// z = 1, unit gains and per-pair cap p.
inline RecoveredPrimal recover_primal(const DispatchProblem& problem,
                                      const std::vector<std::vector<int>>& routes) {
  const int n = problem.num_vehicles();
  const int m = problem.num_cells();
  std::vector<double> caps(m);
  for (int c = 0; c < m; ++c) caps[c] = problem.cell(c).capacity();
  TransportSolver solver(std::vector<double>(n, 1.0), caps);
  std::vector<std::pair<int, int>> index;
  for (int i = 0; i < n; ++i) {
    const auto mask = route_mask(problem, routes[i]);
    for (int c = 0; c < m; ++c) {
      const DemandCell& cell = problem.cell(c);
      if (mask[cell.node] && problem.z(i, c) && cell.p > 0.0) {
        solver.add_arc(i, c, 1.0, cell.p);
        index.emplace_back(i, c);
      }
    }
  }
  const TransportResult flow = solver.solve();
  RecoveredPrimal out;
  out.solution.routes = routes;
  out.solution.y.assign(n, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < index.size(); ++a) {
    out.solution.y[index[a].first][index[a].second] = flow.flow[a];
  }
  out.value = flow.value;
  return out;
}

struct CertificateWitness {
  int vehicle = 0;
  int cell = 0;
  double residual = 0.0;  // y' - x p z
  double lambda = 0.0;
};

struct Certificate {
  bool holds = false;
  std::vector<CertificateWitness> witnesses;
};

// [y' - x p z]^+_lambda = 0 everywhere, where [f]^+_g = f if g > 0 and
// max(f, 0) otherwise.
inline Certificate certify(const DispatchProblem& problem, const JointSolution& sol,
                           const Multipliers& lambda, double tol = kObjectiveTol) {
  Certificate cert;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    const auto mask = route_mask(problem, sol.routes[i]);
    for (int c = 0; c < problem.num_cells(); ++c) {
      const DemandCell& cell = problem.cell(c);
      const double bound = mask[cell.node] && problem.z(i, c) ? cell.p : 0.0;
      const double f = sol.y[i][c] - bound;
      const double bracket = lambda[i][c] > 0.0 ? f : std::max(f, 0.0);
      if (std::abs(bracket) > tol) cert.witnesses.push_back({i, c, f, lambda[i][c]});
    }
  }
  cert.holds = cert.witnesses.empty();
  return cert;
}

enum class SolveStatus { kNotConverged, kConverged, kCertified };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kNotConverged: return "NOT_CONVERGED";
    case SolveStatus::kConverged: return "CONVERGED";
    case SolveStatus::kCertified: return "CERTIFIED";
  }
  return "?";
}

struct IterationRecord {
  int iteration = 0;
  double dual = 0.0;     // D(lambda) at this iteration
  double primal = 0.0;   // value recovered at this iteration
  double gap = 0.0;      // relative gap between the running bests
  double step = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kNotConverged;
  double primal = 0.0;
  double dual = std::numeric_limits<double>::infinity();
  double gap = 0.0;
  int iterations = 0;
  Certificate certificate;
  JointSolution solution;  // node form (x, y')
  std::vector<IterationRecord> trace;
  int weak_duality_violations = 0;
};

inline double relative_gap(double dual, double primal) {
  return std::max(0.0, (dual - primal) / std::max(1.0, dual));
}

inline SolveReport solve(const DispatchProblem& problem, const SolverConfig& config = {}) {
  if (!(config.gap_threshold >= 0.0)) fail_invalid("gap threshold must be >= 0");
  if (config.max_iterations < 1) fail_invalid("max iterations must be >= 1");
  const int n = problem.num_vehicles();
  const int m = problem.num_cells();
  Multipliers lambda(n, std::vector<double>(m, 0.0));
  const double step0 = config.initial_step > 0.0
                           ? config.initial_step
                           : 1.0 / std::max(problem.max_weighted_capacity(), 1e-3);
  bool fast_decay = false;

  SolveReport report;
  report.primal = -1.0;
  for (int t = 1; t <= config.max_iterations; ++t) {
    const D1Result d1 = solve_d1(problem, lambda);
    const D2Result d2 = solve_d2(problem, lambda);
    const double dual = d1.value + d2.value;
    report.dual = std::min(report.dual, dual);

    RecoveredPrimal rec = recover_primal(problem, d2.routes);
    if (rec.value > report.primal) {
      report.primal = rec.value;
      report.solution = std::move(rec.solution);
    }
    if (dual < report.primal - kObjectiveTol) ++report.weak_duality_violations;

    // The Lagrangian maximizers themselves may already satisfy the
    // optimality conditions.
    JointSolution lagrangian{d2.routes, d1.y};
    Certificate cert = certify(problem, lagrangian, lambda);
    report.iterations = t;
    if (cert.holds) {
      report.primal = total_node_mass(lagrangian);
      report.solution = std::move(lagrangian);
      report.dual = report.primal;
      report.gap = 0.0;
      report.certificate = std::move(cert);
      report.status = SolveStatus::kCertified;
      if (config.record_trace) report.trace.push_back({t, dual, report.primal, 0.0, 0.0});
      return report;
    }

    report.gap = relative_gap(report.dual, report.primal);
    if (report.gap < config.fast_decay_factor * config.gap_threshold) fast_decay = true;
    const double step = fast_decay ? step0 / t : step0 / std::sqrt(static_cast<double>(t));
    if (config.record_trace) report.trace.push_back({t, dual, rec.value, report.gap, step});
    if (report.gap <= config.gap_threshold || t == config.max_iterations) {
      report.certificate = std::move(cert);
      report.status = report.gap <= config.gap_threshold ? SolveStatus::kConverged
                                                         : SolveStatus::kNotConverged;
      return report;
    }
    subgradient_step(problem, lambda, d1.y, d2.routes, step);
  }
  return report;
}

}  // namespace rideshare
