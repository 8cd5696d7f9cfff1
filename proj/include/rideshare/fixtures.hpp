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

// Hand-built and seeded random instances shared by tests, the acceptance
// suite and the command-line tool.

#pragma once

#include <algorithm>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/demand.hpp"
#include "rideshare/problem.hpp"
#include "rideshare/region_graph.hpp"
#include "rideshare/sim.hpp"
#include "rideshare/texpand.hpp"

namespace rideshare::fixtures {

// Two vehicles sharing region 2. Integer routes reach 1.3 while a
// fractional split of vehicle 0 between regions 1 and 2 reaches 1.37.
struct GapRegions {
  static constexpr RegionId s1 = 0, s2 = 1, r1 = 2, r2 = 3, r3 = 4, d1 = 5, d2 = 6;
};

inline RegionGraph integrality_gap_graph() {
  using R = GapRegions;
  return RegionGraph::from_edges(7, {{R::s1, R::r1, 1},
                                     {R::s1, R::r2, 1},
                                     {R::r1, R::d1, 1},
                                     {R::r2, R::d1, 1},
                                     {R::s2, R::r2, 1},
                                     {R::r2, R::r3, 1},
                                     {R::r3, R::d2, 1}});
}

inline DispatchProblem integrality_gap_problem() {
  using R = GapRegions;
  const RegionGraph graph = integrality_gap_graph();
  const std::vector<VehicleRoute> routes{{R::s1, 0, R::d1, 2}, {R::s2, 0, R::d2, 3}};
  TimeExpandedGraph g = TimeExpandedGraph::build(graph, routes);
  std::vector<DemandCell> cells{
      {g.node(R::r1, 1), 1, R::r1, R::d1, 1, 0.1},
      {g.node(R::r2, 1), 1, R::r2, R::d2, 1, 1.0},
      {g.node(R::r3, 2), 2, R::r3, R::d2, 1, 0.3},
  };
  std::sort(cells.begin(), cells.end(), [](const DemandCell& a, const DemandCell& b) {
    return a.node < b.node;
  });
  std::vector<std::vector<std::uint8_t>> z(2, std::vector<std::uint8_t>(cells.size(), 0));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const RegionId v = cells[c].origin;
    z[0][c] = v == R::r1 || v == R::r2;
    z[1][c] = v == R::r2 || v == R::r3;
  }
  return DispatchProblem(std::move(g), std::move(cells), std::move(z));
}

struct RandomProblemOptions {
  int min_regions = 4;
  int max_regions = 6;
  int max_vehicles = 2;
  int max_budget_slack = 1;
  double cell_density = 0.5;
  double z_density = 0.7;
  int max_count = 2;
};

// Random layered region graph: region 0..n-1, edges only go forward so
// every route is short. Demand cells sit on random time-expanded nodes.
inline DispatchProblem random_problem(std::uint64_t seed, const RandomProblemOptions& opt = {}) {
  Rng rng(seed);
  const int n = opt.min_regions +
                static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.max_regions - opt.min_regions + 1)));
  std::vector<RegionEdge> edges;
  for (int u = 0; u + 1 < n; ++u) {
    edges.push_back({u, u + 1, 1});
    for (int v = u + 2; v < n; ++v) {
      if (rng.uniform() < 0.35) edges.push_back({u, v, 1 + static_cast<int>(rng.below(2))});
    }
  }
  const RegionGraph graph = RegionGraph::from_edges(n, edges);
  const int vehicles = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.max_vehicles)));
  std::vector<VehicleRoute> routes;
  for (int i = 0; i < vehicles; ++i) {
    const RegionId s = static_cast<RegionId>(rng.below(2));
    const RegionId d = n - 1 - static_cast<RegionId>(rng.below(2));
    const int budget = graph.travel_time(s, d) +
                       static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.max_budget_slack + 1)));
    routes.push_back({s, 0, d, budget});
  }
  TimeExpandedGraph g = TimeExpandedGraph::build(graph, routes);
  std::vector<DemandCell> cells;
  for (int t = 1; t <= g.tau(); ++t) {
    for (int v = 0; v < n; ++v) {
      if (rng.uniform() >= opt.cell_density) continue;
      RegionId u = static_cast<RegionId>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (u >= v) ++u;
      double left = 1.0;
      for (int k = 1; k <= opt.max_count; ++k) {
        if (k > 1 && rng.uniform() < 0.5) break;
        const double p = std::round(rng.uniform() * left * 100.0) / 100.0;
        if (p <= 0.0) continue;
        cells.push_back({g.node(v, t), t, v, u, k, p});
        left -= p;
      }
    }
  }
  std::sort(cells.begin(), cells.end(), [](const DemandCell& a, const DemandCell& b) {
    return std::tuple(a.node, a.destination, a.count) <
           std::tuple(b.node, b.destination, b.count);
  });
  std::vector<std::vector<std::uint8_t>> z(vehicles, std::vector<std::uint8_t>(cells.size(), 0));
  // Feasibility depends on the vehicle and (node, destination), not on the count.
  for (int i = 0; i < vehicles; ++i) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0 && cells[c].node == cells[c - 1].node &&
          cells[c].destination == cells[c - 1].destination) {
        z[i][c] = z[i][c - 1];
        continue;
      }
      const bool interior = cells[c].origin != routes[i].destination;
      z[i][c] = interior && rng.uniform() < opt.z_density ? 1 : 0;
    }
  }
  return DispatchProblem(std::move(g), std::move(cells), std::move(z));
}

// Bidirectional grid of `cols` x `rows` regions with unit-slot edges;
// region id = row * cols + col.
inline RegionGraph grid_graph(int cols, int rows) {
  std::vector<RegionEdge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const RegionId id = r * cols + c;
      if (c + 1 < cols) {
        edges.push_back({id, id + 1, 1});
        edges.push_back({id + 1, id, 1});
      }
      if (r + 1 < rows) {
        edges.push_back({id, id + cols, 1});
        edges.push_back({id + cols, id, 1});
      }
    }
  }
  return RegionGraph::from_edges(cols * rows, edges);
}

struct Scenario {
  RegionGraph graph;
  DemandModel demand;
  Instance instance;
  double alpha = 1.3;
};

// Demand-rich scenario on a 4 x 3 grid. Four vehicles cross from the west
// column to the east column. Two hot regions sit off the default fastest
// staircase; every other region carries light background demand toward
// the east side.
inline Scenario demand_rich_scenario() {
  constexpr int kCols = 4;
  constexpr int kRows = 3;
  constexpr int kHorizon = 48;
  Scenario sc{grid_graph(kCols, kRows), DemandModel(kHorizon, kCols * kRows, 2), {}, 1.3};
  auto id = [](int col, int row) { return row * kCols + col; };
  const RegionId hot_a = id(1, 2);
  const RegionId hot_b = id(2, 1);
  for (int t = 0; t < kHorizon; ++t) {
    for (int row = 0; row < kRows; ++row) {
      for (int col = 0; col < kCols - 1; ++col) {
        const RegionId v = id(col, row);
        const RegionId u = id(kCols - 1, row);
        if (v == hot_a) {
          sc.demand.set(t, v, u, {0.9, 0.0});
        } else if (v == hot_b) {
          sc.demand.set(t, v, u, {0.6, 0.0});
        } else {
          sc.demand.set(t, v, u, {0.05, 0.0});
        }
      }
    }
  }
  sc.instance.start_slot = 2;
  sc.instance.sources = {id(0, 0), id(0, 0), id(0, 1), id(0, 2)};
  sc.instance.destinations = {id(3, 2), id(3, 1), id(3, 2), id(3, 0)};
  return sc;
}

}  // namespace rideshare::fixtures
