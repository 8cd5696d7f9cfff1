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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rideshare/fixtures.hpp"
#include "rideshare/objective.hpp"
#include "test_support.hpp"

namespace rideshare {
namespace {

using test_support::random_route_form;

RoutedAssignment masses(std::vector<double> ys) {
  RoutedAssignment ra;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    ra.route.push_back(static_cast<int>(j));
    ra.masses.push_back({static_cast<int>(j), 0, ys[j]});
  }
  return ra;
}

TEST(Objective, EmptyRouteScoresZero) {
  const RoutedAssignment ra;
  EXPECT_EQ(objective_f(ra), 0.0);
  EXPECT_EQ(objective_g(ra), 0.0);
  EXPECT_EQ(objective_h(ra), 1.0);
}

TEST(Objective, HandEvaluatedValues) {
  EXPECT_DOUBLE_EQ(objective_f(masses({0.5})), 0.5);
  EXPECT_DOUBLE_EQ(objective_f(masses({0.5, 0.3})), 0.65);
  EXPECT_DOUBLE_EQ(objective_g(masses({0.5, 0.3})), 0.8);
  EXPECT_DOUBLE_EQ(objective_g(masses({0.7, 0.7})), 1.0);
  EXPECT_DOUBLE_EQ(objective_h(masses({0.5, 0.3})), 1.0);
  EXPECT_DOUBLE_EQ(objective_h(masses({0.7, 0.7})), 1.4);
}

TEST(Objective, RejectsOutOfRangeMassAndOffRouteNodes) {
  EXPECT_THROW(objective_f(masses({1.5})), InvalidInput);
  EXPECT_THROW(objective_g(masses({-0.5})), InvalidInput);
  RoutedAssignment ra = masses({0.2});
  ra.masses.push_back({99, 0, 0.1});
  EXPECT_THROW(objective_f(ra), InvalidInput);
}

TEST(Objective, LongRoutesUseStableProduct) {
  std::vector<double> ys(200, 0.01);
  const double direct = 1.0 - std::pow(0.99, 200);
  EXPECT_NEAR(objective_f(masses(ys)), direct, 1e-12);
}

// (1 - 1/e) g <= f <= g, and g = (sum y) / h.
TEST(Objective, SandwichAndScalingIdentity) {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    std::vector<double> ys(n);
    for (double& y : ys) y = rng.uniform() * (rng.uniform() < 0.5 ? 1.0 : 0.2);
    const RoutedAssignment ra = masses(ys);
    const double f = objective_f(ra), g = objective_g(ra), h = objective_h(ra);
    EXPECT_LE(kOneMinusInvE * g, f + 1e-12);
    EXPECT_LE(f, g + 1e-12);
    double total = 0.0;
    for (double y : ys) total += y;
    EXPECT_NEAR(g, total / h, 1e-12);
    EXPECT_GE(h, 1.0);
  }
}

TEST(SolutionMaps, ZeroAssignment) {
  const DispatchProblem problem = fixtures::integrality_gap_problem();
  Rng rng(1);
  JointSolution sol;
  sol.routes = test_support::random_routes(problem, rng);
  sol.y.assign(2, std::vector<double>(problem.num_cells(), 0.0));
  const JointSolution node = map_mpa_to_mpan(problem, sol);
  EXPECT_EQ(total_node_mass(node), 0.0);
  EXPECT_EQ(total_g(problem, sol), 0.0);
  EXPECT_TRUE(validate_node_form(problem, node).empty());
}

TEST(SolutionMaps, ObjectivePreservedAndFeasibilityKept) {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const DispatchProblem problem = fixtures::random_problem(mix_seed(77, trial));
    const JointSolution route_form = random_route_form(problem, rng);
    ASSERT_TRUE(route_form_feasible(problem, route_form));
    const JointSolution node = map_mpa_to_mpan(problem, route_form);
    EXPECT_TRUE(validate_node_form(problem, node).empty()) << "trial " << trial;
    EXPECT_NEAR(total_node_mass(node), total_g(problem, route_form), 1e-12);

    const JointSolution back = map_mpan_to_mpa(problem, node);
    EXPECT_TRUE(route_form_feasible(problem, back));
    EXPECT_NEAR(total_g(problem, back), total_node_mass(node), 1e-12);
  }
}

TEST(NodeForm, ReportsEachViolatedConstraint) {
  const DispatchProblem problem = fixtures::integrality_gap_problem();
  const auto& g = problem.graph();
  using R = fixtures::GapRegions;
  JointSolution sol;
  sol.routes = {{g.node(R::s1, 0), g.node(R::r2, 1), g.node(R::d1, 2), g.sink(0)},
                {g.node(R::s2, 0), g.node(R::r2, 1), g.node(R::r3, 2), g.node(R::d2, 3),
                 g.sink(1)}};
  sol.y.assign(2, std::vector<double>(problem.num_cells(), 0.0));
  int r2 = -1, r1 = -1;
  for (int c = 0; c < problem.num_cells(); ++c) {
    if (problem.cell(c).origin == R::r2) r2 = c;
    if (problem.cell(c).origin == R::r1) r1 = c;
  }
  sol.y[0][r2] = 0.7;
  sol.y[1][r2] = 0.7;  // fleet cap is 1
  sol.y[0][r1] = 0.1;  // r1 is off vehicle 0's route
  const auto v = validate_node_form(problem, sol);
  auto count = [&](NodeFormConstraint kind) {
    return std::count_if(v.begin(), v.end(),
                         [&](const NodeFormViolation& x) { return x.constraint == kind; });
  };
  EXPECT_EQ(count(NodeFormConstraint::kFleetCapacity), 1);
  EXPECT_EQ(count(NodeFormConstraint::kRouteCoupling), 1);
  EXPECT_EQ(count(NodeFormConstraint::kVehicleBudget), 0);
  sol.routes[0] = {g.node(R::s1, 0), g.sink(0)};
  EXPECT_EQ(validate_node_form(problem, sol).front().constraint, NodeFormConstraint::kRoute);
}

}  // namespace
}  // namespace rideshare
