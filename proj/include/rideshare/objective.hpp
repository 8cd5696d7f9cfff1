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

// Per-vehicle objectives over a routed assignment:
//
//   f = 1 - prod_{nodes} prod_u (1 - sum_k y)    expected pickups
//   g = min(1, sum y)                            concave surrogate
//   h = max(1, sum y)                            scale of the node-form map
//
// together with the maps between route form (y) and node form (x, y').

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "rideshare/assignment.hpp"
#include "rideshare/common.hpp"
#include "rideshare/problem.hpp"

namespace rideshare {

// Aggregate mass sum_k y at one route node toward one destination.
struct NodeMass {
  int node = 0;
  RegionId destination = 0;
  double y = 0.0;
};

struct RoutedAssignment {
  std::vector<int> route;
  std::vector<NodeMass> masses;

  int interior_nodes() const {
    std::set<int> nodes;
    for (const auto& m : masses) nodes.insert(m.node);
    return static_cast<int>(nodes.size());
  }
};

inline constexpr int kLogSpaceThreshold = 64;

namespace detail {

inline void check_masses(const RoutedAssignment& ra) {
  const std::set<int> on_route(ra.route.begin(), ra.route.end());
  for (const auto& m : ra.masses) {
    if (!(m.y >= -kAssignmentTol && m.y <= 1.0 + kAssignmentTol)) {
      fail_invalid("assignment mass ", m.y, " at node ", m.node, " outside [0,1]");
    }
    if (!ra.route.empty() && !on_route.contains(m.node)) {
      fail_invalid("assignment mass on node ", m.node, " off the route");
    }
  }
}

inline double total_mass(const RoutedAssignment& ra) {
  detail::check_masses(ra);
  double total = 0.0;
  for (const auto& m : ra.masses) total += std::clamp(m.y, 0.0, 1.0);
  return total;
}

}  // namespace detail

inline double objective_f(const RoutedAssignment& ra) {
  detail::check_masses(ra);
  if (ra.interior_nodes() <= kLogSpaceThreshold) {
    double miss = 1.0;
    for (const auto& m : ra.masses) miss *= 1.0 - std::clamp(m.y, 0.0, 1.0);
    return 1.0 - miss;
  }
  double log_miss = 0.0;
  for (const auto& m : ra.masses) {
    const double y = std::clamp(m.y, 0.0, 1.0);
    if (y >= 1.0) return 1.0;
    log_miss += std::log1p(-y);
  }
  return -std::expm1(log_miss);
}

inline double objective_g(const RoutedAssignment& ra) {
  return std::min(1.0, detail::total_mass(ra));
}

inline double objective_h(const RoutedAssignment& ra) {
  return std::max(1.0, detail::total_mass(ra));
}

// Route-form y of vehicle i folded into per-(node, destination) masses.
inline RoutedAssignment routed_assignment(const DispatchProblem& problem,
                                          const JointSolution& sol, int vehicle) {
  RoutedAssignment ra;
  ra.route = sol.routes[vehicle];
  std::map<std::pair<int, RegionId>, double> sums;
  for (int c = 0; c < problem.num_cells(); ++c) {
    const double y = sol.y[vehicle][c];
    if (y == 0.0) continue;
    const DemandCell& cell = problem.cell(c);
    sums[{cell.node, cell.destination}] += y;
  }
  for (const auto& [key, y] : sums) ra.masses.push_back({key.first, key.second, y});
  return ra;
}

// Sum of f over vehicles for a route-form solution (the MP-T objective).
inline double total_f(const DispatchProblem& problem, const JointSolution& sol) {
  double total = 0.0;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    total += objective_f(routed_assignment(problem, sol, i));
  }
  return total;
}

inline double total_g(const DispatchProblem& problem, const JointSolution& sol) {
  double total = 0.0;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    total += objective_g(routed_assignment(problem, sol, i));
  }
  return total;
}

// Node-form objective: sum of y'.
inline double total_node_mass(const JointSolution& sol) {
  double total = 0.0;
  for (const auto& row : sol.y) {
    for (double v : row) total += v;
  }
  return total;
}

// y' = x * y / h, vehicle by vehicle.
inline JointSolution map_mpa_to_mpan(const DispatchProblem& problem,
                                     const JointSolution& sol) {
  JointSolution out;
  out.routes = sol.routes;
  out.y.assign(problem.num_vehicles(), std::vector<double>(problem.num_cells(), 0.0));
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    const double h = objective_h(routed_assignment(problem, sol, i));
    const auto mask = route_mask(problem, sol.routes[i]);
    for (int c = 0; c < problem.num_cells(); ++c) {
      if (mask[problem.cell(c).node]) out.y[i][c] = sol.y[i][c] / h;
    }
  }
  return out;
}

// y = x * y'.
inline JointSolution map_mpan_to_mpa(const DispatchProblem& problem,
                                     const JointSolution& sol) {
  JointSolution out;
  out.routes = sol.routes;
  out.y.assign(problem.num_vehicles(), std::vector<double>(problem.num_cells(), 0.0));
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    const auto mask = route_mask(problem, sol.routes[i]);
    for (int c = 0; c < problem.num_cells(); ++c) {
      if (mask[problem.cell(c).node]) out.y[i][c] = sol.y[i][c];
    }
  }
  return out;
}

enum class NodeFormConstraint {
  kRoute,            // x is not a valid route
  kNonNegative,      // y' >= 0
  kVehicleBudget,    // sum_c y'_ic <= 1
  kFleetCapacity,    // sum_i y'_ic <= k p
  kRouteCoupling,    // y'_ic <= x p z
};

struct NodeFormViolation {
  NodeFormConstraint constraint;
  int vehicle = -1;
  int cell = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

inline std::vector<NodeFormViolation> validate_node_form(const DispatchProblem& problem,
                                                         const JointSolution& sol) {
  std::vector<NodeFormViolation> out;
  const int n = problem.num_vehicles();
  if (static_cast<int>(sol.routes.size()) != n || static_cast<int>(sol.y.size()) != n) {
    fail_invalid("solution shape does not match the problem");
  }
  std::vector<double> fleet(problem.num_cells(), 0.0);
  for (int i = 0; i < n; ++i) {
    try {
      check_route(problem.graph(), i, sol.routes[i]);
    } catch (const InvalidInput&) {
      out.push_back({NodeFormConstraint::kRoute, i, -1, 0.0, 0.0});
      continue;
    }
    const auto mask = route_mask(problem, sol.routes[i]);
    double budget = 0.0;
    for (int c = 0; c < problem.num_cells(); ++c) {
      const double y = sol.y[i][c];
      const DemandCell& cell = problem.cell(c);
      if (y < -kAssignmentTol) out.push_back({NodeFormConstraint::kNonNegative, i, c, y, 0.0});
      const double cap = mask[cell.node] && problem.z(i, c) ? cell.p : 0.0;
      if (y > cap + kAssignmentTol) {
        out.push_back({NodeFormConstraint::kRouteCoupling, i, c, y, cap});
      }
      budget += y;
      fleet[c] += y;
    }
    if (budget > 1.0 + kAssignmentTol) {
      out.push_back({NodeFormConstraint::kVehicleBudget, i, -1, budget, 1.0});
    }
  }
  for (int c = 0; c < problem.num_cells(); ++c) {
    if (fleet[c] > problem.cell(c).capacity() + kAssignmentTol) {
      out.push_back({NodeFormConstraint::kFleetCapacity, -1, c, fleet[c],
                     problem.cell(c).capacity()});
    }
  }
  return out;
}

// Route-form feasibility: valid routes, y only on route nodes, and the
// assignment constraints y <= p, y <= z, sum_i y <= k p.
inline bool route_form_feasible(const DispatchProblem& problem, const JointSolution& sol) {
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    try {
      check_route(problem.graph(), i, sol.routes[i]);
    } catch (const InvalidInput&) {
      return false;
    }
    const auto mask = route_mask(problem, sol.routes[i]);
    for (int c = 0; c < problem.num_cells(); ++c) {
      if (sol.y[i][c] > kAssignmentTol && !mask[problem.cell(c).node]) return false;
    }
  }
  return validate(problem, sol).empty();
}

}  // namespace rideshare
