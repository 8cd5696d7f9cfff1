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

// Brute-force reference solvers for desk-scale instances. Everything here
// enumerates routes explicitly and solves inner problems with the dense
// simplex or a grid, so results are independent of the flow-based solver.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/dense_lp.hpp"
#include "rideshare/objective.hpp"
#include "rideshare/problem.hpp"
#include "rideshare/solver.hpp"

namespace rideshare {

struct OracleBudget {
  int max_vehicles = 2;
  int max_route_nodes = 12;        // distinct nodes on any vehicle's routes
  double grid_resolution = 0.05;
  long long max_route_tuples = 10'000;
  long long max_grid_points = 20'000'000;
};

class OracleRefusal : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct OracleEstimate {
  std::vector<long long> routes_per_vehicle;
  long long route_tuples = 1;
  int route_nodes = 0;
  long long grid_points = 0;  // upper bound over route tuples, MP-T only
};

// Number of distinct routes of vehicle i, by path counting on the DAG.
inline long long count_routes(const DispatchProblem& problem, int vehicle) {
  const TimeExpandedGraph& g = problem.graph();
  std::vector<long long> ways(g.num_nodes(), 0);
  ways[g.sink(vehicle)] = 1;
  for (int n = g.num_region_nodes() - 1; n >= 0; --n) {
    for (int s : g.vehicle_successors(vehicle, n)) {
      ways[n] = std::min(ways[n] + ways[s], 1LL << 50);
    }
  }
  return ways[g.start_node(vehicle)];
}

inline std::vector<std::vector<int>> enumerate_routes(const DispatchProblem& problem,
                                                      int vehicle) {
  const TimeExpandedGraph& g = problem.graph();
  std::vector<std::vector<int>> out;
  std::vector<int> path{g.start_node(vehicle)};
  std::function<void()> dfs = [&]() {
    const int cur = path.back();
    if (cur == g.sink(vehicle)) {
      out.push_back(path);
      return;
    }
    for (int s : g.vehicle_successors(vehicle, cur)) {
      path.push_back(s);
      dfs();
      path.pop_back();
    }
  };
  dfs();
  return out;
}

namespace detail {

// Pairs (vehicle, cell) that a given route tuple can serve.
inline std::vector<std::pair<int, int>> servable_pairs(
    const DispatchProblem& problem, const std::vector<std::vector<int>>& routes) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    const auto mask = route_mask(problem, routes[i]);
    for (int c = 0; c < problem.num_cells(); ++c) {
      if (mask[problem.cell(c).node] && problem.z(i, c) && problem.cell(c).p > 0.0) {
        out.emplace_back(i, c);
      }
    }
  }
  return out;
}

inline long long grid_size(const DispatchProblem& problem,
                           const std::vector<std::pair<int, int>>& pairs, double res) {
  long long total = 1;
  for (auto [i, c] : pairs) {
    const long long levels =
        static_cast<long long>(std::floor(problem.cell(c).p / res + 1e-9)) + 2;
    total = std::min(total * levels, 1LL << 50);
  }
  return total;
}

template <typename Fn>
void for_each_route_tuple(const std::vector<std::vector<std::vector<int>>>& routes,
                          Fn&& fn) {
  std::vector<std::vector<int>> tuple(routes.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == routes.size()) {
      fn(tuple);
      return;
    }
    for (const auto& r : routes[i]) {
      tuple[i] = r;
      rec(i + 1);
    }
  };
  rec(0);
}

}  // namespace detail

inline OracleEstimate estimate(const DispatchProblem& problem, const OracleBudget& budget,
                               bool with_grid) {
  OracleEstimate est;
  std::set<int> nodes;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    est.routes_per_vehicle.push_back(count_routes(problem, i));
    est.route_tuples = std::min(est.route_tuples * est.routes_per_vehicle.back(), 1LL << 50);
  }
  if (problem.num_vehicles() > budget.max_vehicles ||
      est.route_tuples > budget.max_route_tuples) {
    return est;
  }
  std::vector<std::vector<std::vector<int>>> routes;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    routes.push_back(enumerate_routes(problem, i));
    for (const auto& r : routes.back()) nodes.insert(r.begin(), r.end());
  }
  est.route_nodes = static_cast<int>(nodes.size());
  if (with_grid) {
    detail::for_each_route_tuple(routes, [&](const std::vector<std::vector<int>>& tuple) {
      const auto pairs = detail::servable_pairs(problem, tuple);
      est.grid_points += detail::grid_size(problem, pairs, budget.grid_resolution);
    });
  }
  return est;
}

inline void enforce_budget(const DispatchProblem& problem, const OracleBudget& budget,
                           bool with_grid) {
  const OracleEstimate est = estimate(problem, budget, with_grid);
  if (problem.num_vehicles() > budget.max_vehicles) {
    throw OracleRefusal(str_cat("oracle refused: ", problem.num_vehicles(),
                                " vehicles exceed the budget of ", budget.max_vehicles));
  }
  if (est.route_tuples > budget.max_route_tuples) {
    throw OracleRefusal(str_cat("oracle refused: ", est.route_tuples,
                                " route tuples exceed the budget of ",
                                budget.max_route_tuples));
  }
  if (est.route_nodes > budget.max_route_nodes) {
    throw OracleRefusal(str_cat("oracle refused: ", est.route_nodes,
                                " route nodes exceed the budget of ",
                                budget.max_route_nodes));
  }
  if (with_grid && est.grid_points > budget.max_grid_points) {
    throw OracleRefusal(str_cat("oracle refused: ", est.grid_points,
                                " grid points exceed the budget of ",
                                budget.max_grid_points));
  }
}

struct OracleResult {
  double value = 0.0;
  JointSolution solution;   // node form for MP-AN, route form for MP-T
  double error_bound = 0.0; // grid error, MP-T only
  long long evaluations = 0;
};

// y' LP for fixed routes, solved with the dense simplex.
inline OracleResult solve_fixed_routes_lp(const DispatchProblem& problem,
                                          const std::vector<std::vector<int>>& routes) {
  const auto pairs = detail::servable_pairs(problem, routes);
  LinearProgram lp;
  for (std::size_t v = 0; v < pairs.size(); ++v) lp.add_var(1.0);
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    lp.add_row(std::vector<std::pair<int, double>>{{static_cast<int>(v), 1.0}},
               RowSense::kLessEqual,
               problem.cell(pairs[v].second).p);
  }
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    std::vector<std::pair<int, double>> terms;
    for (std::size_t v = 0; v < pairs.size(); ++v) {
      if (pairs[v].first == i) terms.emplace_back(static_cast<int>(v), 1.0);
    }
    if (!terms.empty()) lp.add_row(terms, RowSense::kLessEqual, 1.0);
  }
  for (int c = 0; c < problem.num_cells(); ++c) {
    std::vector<std::pair<int, double>> terms;
    for (std::size_t v = 0; v < pairs.size(); ++v) {
      if (pairs[v].second == c) terms.emplace_back(static_cast<int>(v), 1.0);
    }
    if (terms.size() > 1) {
      lp.add_row(terms, RowSense::kLessEqual, problem.cell(c).capacity());
    }
  }
  OracleResult out;
  out.solution.routes = routes;
  out.solution.y.assign(problem.num_vehicles(),
                        std::vector<double>(problem.num_cells(), 0.0));
  if (pairs.empty()) return out;
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) fail_invalid("fixed-route LP not optimal");
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    out.solution.y[pairs[v].first][pairs[v].second] = sol.x[v];
  }
  out.value = sol.value;
  return out;
}

// Exact node-form optimum over all route tuples.
inline OracleResult oracle_mpan(const DispatchProblem& problem,
                                const OracleBudget& budget = {}) {
  enforce_budget(problem, budget, false);
  std::vector<std::vector<std::vector<int>>> routes;
  for (int i = 0; i < problem.num_vehicles(); ++i) routes.push_back(enumerate_routes(problem, i));
  OracleResult best;
  best.value = -1.0;
  long long evaluations = 0;
  detail::for_each_route_tuple(routes, [&](const std::vector<std::vector<int>>& tuple) {
    OracleResult r = solve_fixed_routes_lp(problem, tuple);
    ++evaluations;
    if (r.value > best.value + 1e-12) best = std::move(r);
  });
  best.evaluations = evaluations;
  return best;
}

// Grid search over y for every route tuple. Coordinates take the values
// 0, res, 2 res, ... below p plus p itself. Rounding an optimum down to the
// grid keeps it feasible and moves every coordinate by less than res; since
// each partial derivative of f lies in [0, 1], the reported error bound is
// res times the largest number of coordinates.
inline OracleResult oracle_mpt(const DispatchProblem& problem,
                               const OracleBudget& budget = {}) {
  enforce_budget(problem, budget, true);
  const double res = budget.grid_resolution;
  std::vector<std::vector<std::vector<int>>> routes;
  for (int i = 0; i < problem.num_vehicles(); ++i) routes.push_back(enumerate_routes(problem, i));

  OracleResult best;
  best.value = -1.0;
  std::size_t max_coords = 0;
  long long evaluations = 0;
  detail::for_each_route_tuple(routes, [&](const std::vector<std::vector<int>>& tuple) {
    const auto pairs = detail::servable_pairs(problem, tuple);
    max_coords = std::max(max_coords, pairs.size());
    JointSolution sol;
    sol.routes = tuple;
    sol.y.assign(problem.num_vehicles(), std::vector<double>(problem.num_cells(), 0.0));
    std::vector<double> fleet(problem.num_cells(), 0.0);
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
      if (v == pairs.size()) {
        ++evaluations;
        const double value = total_f(problem, sol);
        if (value > best.value + 1e-12) {
          best.value = value;
          best.solution = sol;
        }
        return;
      }
      const auto [i, c] = pairs[v];
      const DemandCell& cell = problem.cell(c);
      std::vector<double> levels;
      for (int s = 0; s * res < cell.p - 1e-12; ++s) levels.push_back(s * res);
      levels.push_back(cell.p);
      for (double y : levels) {
        if (fleet[c] + y > cell.capacity() + kAssignmentTol) break;
        sol.y[i][c] = y;
        fleet[c] += y;
        rec(v + 1);
        fleet[c] -= y;
      }
      sol.y[i][c] = 0.0;
    };
    rec(0);
  });
  best.error_bound = res * static_cast<double>(max_coords);
  best.evaluations = evaluations;
  return best;
}

// Longest source -> target path by full enumeration.
inline PathResult oracle_d2(int num_nodes,
                            const std::function<std::vector<int>(int)>& successors,
                            const std::vector<double>& weight, int source, int target,
                            int max_nodes = 10) {
  if (num_nodes > max_nodes) {
    throw OracleRefusal(str_cat("oracle refused: ", num_nodes, " nodes exceed ", max_nodes));
  }
  PathResult best;
  bool found = false;
  std::vector<int> path{source};
  double value = weight[source];
  std::function<void()> dfs = [&]() {
    const int cur = path.back();
    if (cur == target) {
      if (!found || value > best.value) {
        best.value = value;
        best.path = path;
        found = true;
      }
      return;
    }
    for (int s : successors(cur)) {
      if (std::find(path.begin(), path.end(), s) != path.end()) {
        fail_invalid("oracle_d2: graph has a cycle through ", s);
      }
      path.push_back(s);
      value += weight[s];
      dfs();
      value -= weight[s];
      path.pop_back();
    }
  };
  dfs();
  return best;
}

// Node-form LP with each route relaxed to a unit flow through the
// vehicle's part of the time-expanded graph; x at a node is its inflow.
inline OracleResult lp_relaxation_mpan(const DispatchProblem& problem) {
  const TimeExpandedGraph& g = problem.graph();
  LinearProgram lp;
  const int n = problem.num_vehicles();
  std::vector<std::vector<int>> node_in(g.num_nodes());
  std::vector<std::vector<int>> node_out(g.num_nodes());
  std::vector<std::vector<int>> y_var(n, std::vector<int>(problem.num_cells(), -1));
  std::vector<std::pair<int, double>> budget_terms;
  for (int i = 0; i < n; ++i) {
    std::vector<char> reach(g.num_nodes(), 0);
    reach[g.start_node(i)] = 1;
    std::vector<std::vector<int>> in(g.num_nodes());
    std::vector<std::vector<int>> out(g.num_nodes());
    for (int u = 0; u < g.num_nodes(); ++u) {
      if (!reach[u]) continue;
      for (int s : g.vehicle_successors(i, u)) {
        reach[s] = 1;
        const int e = lp.add_var(0.0);
        out[u].push_back(e);
        in[s].push_back(e);
      }
    }
    for (int u = 0; u < g.num_nodes(); ++u) {
      if (!reach[u]) continue;
      std::vector<std::pair<int, double>> terms;
      for (int e : out[u]) terms.emplace_back(e, 1.0);
      for (int e : in[u]) terms.emplace_back(e, -1.0);
      const double rhs = u == g.start_node(i) ? 1.0 : (u == g.sink(i) ? -1.0 : 0.0);
      lp.add_row(terms, RowSense::kEqual, rhs);
    }
    std::vector<std::pair<int, double>> budget;
    for (int c = 0; c < problem.num_cells(); ++c) {
      const DemandCell& cell = problem.cell(c);
      if (!problem.z(i, c) || cell.p <= 0.0 || !reach[cell.node]) continue;
      const int v = lp.add_var(1.0);
      y_var[i][c] = v;
      budget.emplace_back(v, 1.0);
      std::vector<std::pair<int, double>> coupling{{v, 1.0}};
      for (int e : in[cell.node]) coupling.emplace_back(e, -cell.p);
      lp.add_row(coupling, RowSense::kLessEqual, 0.0);
    }
    if (!budget.empty()) lp.add_row(budget, RowSense::kLessEqual, 1.0);
  }
  for (int c = 0; c < problem.num_cells(); ++c) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) {
      if (y_var[i][c] >= 0) terms.emplace_back(y_var[i][c], 1.0);
    }
    if (!terms.empty()) lp.add_row(terms, RowSense::kLessEqual, problem.cell(c).capacity());
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) fail_invalid("route relaxation LP not optimal");
  OracleResult out;
  out.value = sol.value;
  out.solution.y.assign(n, std::vector<double>(problem.num_cells(), 0.0));
  out.solution.routes.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < problem.num_cells(); ++c) {
      if (y_var[i][c] >= 0) out.solution.y[i][c] = sol.x[y_var[i][c]];
    }
  }
  return out;
}

}  // namespace rideshare
