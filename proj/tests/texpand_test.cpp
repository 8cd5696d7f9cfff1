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

#include <functional>
#include <map>
#include <vector>

#include "rideshare/texpand.hpp"

namespace rideshare {
namespace {

RegionGraph line(int n) {
  std::vector<RegionEdge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1});
  return RegionGraph::from_edges(n, edges);
}

TEST(TimeExpandedGraph, NodeCountsForSingleVehicle) {
  const std::vector<VehicleRoute> vehicles{{0, 0, 2, 2}};
  const auto g = TimeExpandedGraph::build(line(3), vehicles);
  EXPECT_EQ(g.tau(), 2);
  EXPECT_EQ(g.num_region_nodes(), 9);
  EXPECT_EQ(g.num_nodes(), 10);
  const GraphStats s = g.stats();
  EXPECT_EQ(s.sinks, 1);
  EXPECT_EQ(s.region_edges, 4);  // 0->1, 1->2 from layers 0 and 1
  EXPECT_EQ(s.sink_edges, 2);    // region 2 at layers 1 and 2
  EXPECT_TRUE(g.is_acyclic());
}

TEST(TimeExpandedGraph, PerVehicleSinkWindows) {
  const RegionGraph r = RegionGraph::from_edges(
      4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {1, 0, 1}, {2, 1, 1}, {3, 2, 1}});
  const std::vector<VehicleRoute> vehicles{{0, 0, 2, 2}, {0, 0, 3, 3}};
  const auto g = TimeExpandedGraph::build(r, vehicles);
  EXPECT_EQ(g.tau(), 3);
  EXPECT_EQ(g.stats().sinks, 2);
  for (int t = 0; t <= 3; ++t) {
    const auto a = g.vehicle_successors(0, g.node(2, t));
    const auto b = g.vehicle_successors(1, g.node(3, t));
    EXPECT_EQ(a == std::vector<int>{g.sink(0)}, t >= 1 && t <= 2) << t;
    EXPECT_EQ(b == std::vector<int>{g.sink(1)}, t >= 1 && t <= 3) << t;
  }
}

TEST(TimeExpandedGraph, RejectsDegenerateAndUnreachableVehicles) {
  const RegionGraph r = line(3);
  EXPECT_THROW(TimeExpandedGraph::build(r, std::vector<VehicleRoute>{{1, 0, 1, 2}}),
               InvalidInput);
  try {
    TimeExpandedGraph::build(r, std::vector<VehicleRoute>{{0, 0, 2, 2}, {2, 0, 0, 5}});
    FAIL() << "expected an error";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("vehicle 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(TimeExpandedGraph::build(r, std::vector<VehicleRoute>{{0, 0, 2, 1}}),
               InvalidInput);
}

TEST(TimeExpandedGraph, WaitingAddsSelfLayerEdges) {
  const std::vector<VehicleRoute> vehicles{{0, 0, 2, 3}};
  const auto plain = TimeExpandedGraph::build(line(3), vehicles, false);
  const auto wait = TimeExpandedGraph::build(line(3), vehicles, true);
  EXPECT_GT(wait.stats().region_edges, plain.stats().region_edges);
  const auto succ = wait.successors(wait.node(0, 0));
  EXPECT_NE(std::find(succ.begin(), succ.end(), wait.node(0, 1)), succ.end());
}

TEST(RouteIndicator, DirectRoute) {
  const std::vector<VehicleRoute> vehicles{{0, 0, 1, 2}};
  const auto g = TimeExpandedGraph::build(line(2), vehicles);
  const std::vector<int> route{g.node(0, 0), g.node(1, 1), g.sink(0)};
  const RouteIndicator ind = route_to_indicator(g, 0, route);
  int marked = 0;
  for (auto x : ind.x) marked += x;
  EXPECT_EQ(marked, 3);
  EXPECT_EQ(indicator_to_route(g, 0, ind), route);
}

TEST(RouteIndicator, RejectsTwoNodesInOneLayer) {
  const std::vector<VehicleRoute> vehicles{{0, 0, 2, 3}};
  const auto g = TimeExpandedGraph::build(line(3), vehicles);
  RouteIndicator ind;
  ind.x.assign(g.num_nodes(), 0);
  ind.x[g.node(0, 0)] = 1;
  ind.x[g.node(1, 1)] = 1;
  ind.x[g.node(0, 1)] = 1;
  ind.x[g.node(2, 2)] = 1;
  ind.x[g.sink(0)] = 1;
  EXPECT_THROW(indicator_to_route(g, 0, ind), InvalidInput);
}

TEST(RouteIndicator, RejectsBrokenRoutes) {
  const std::vector<VehicleRoute> vehicles{{0, 0, 2, 3}};
  const auto g = TimeExpandedGraph::build(line(3), vehicles);
  EXPECT_THROW(route_to_indicator(g, 0, std::vector<int>{g.node(0, 0), g.sink(0)}),
               InvalidInput);
  RouteIndicator ind;
  ind.x.assign(g.num_nodes(), 0);
  ind.x[g.node(0, 0)] = 1;
  ind.x[g.node(2, 2)] = 1;
  ind.x[g.sink(0)] = 1;
  EXPECT_THROW(indicator_to_route(g, 0, ind), InvalidInput);
}

// Random valid routes survive the round trip through the indicator.
TEST(RouteIndicator, RoundTripOnRandomRoutes) {
  Rng rng(13);
  int checked = 0;
  while (checked < 100) {
    const int n = 3 + static_cast<int>(rng.below(4));
    std::vector<RegionEdge> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v && rng.uniform() < 0.5) edges.push_back({u, v, 1 + static_cast<int>(rng.below(2))});
      }
    }
    const RegionGraph r = RegionGraph::from_edges(n, edges);
    const RegionId s = static_cast<RegionId>(rng.below(n));
    const RegionId d = static_cast<RegionId>(rng.below(n));
    if (s == d || !r.reachable(s, d)) continue;
    const int budget = r.travel_time(s, d) + static_cast<int>(rng.below(3));
    const std::vector<VehicleRoute> vehicles{{s, 0, d, budget}};
    const auto g = TimeExpandedGraph::build(r, vehicles, rng.uniform() < 0.3);
    ASSERT_TRUE(g.is_acyclic());
    std::map<int, bool> memo;
    std::function<bool(int)> reaches = [&](int node) {
      if (node == g.sink(0)) return true;
      if (auto it = memo.find(node); it != memo.end()) return it->second;
      bool ok = false;
      for (int m : g.vehicle_successors(0, node)) ok = ok || reaches(m);
      return memo[node] = ok;
    };
    ASSERT_TRUE(reaches(g.start_node(0)));
    std::vector<int> route{g.start_node(0)};
    while (route.back() != g.sink(0)) {
      std::vector<int> options;
      for (int m : g.vehicle_successors(0, route.back())) {
        if (reaches(m)) options.push_back(m);
      }
      route.push_back(options[rng.below(options.size())]);
    }
    EXPECT_EQ(indicator_to_route(g, 0, route_to_indicator(g, 0, route)), route);
    ++checked;
  }
}

}  // namespace
}  // namespace rideshare
