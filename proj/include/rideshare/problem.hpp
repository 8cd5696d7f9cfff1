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

// One snapshot of the joint assignment-and-routing problem: the
// time-expanded graph for the routable vehicles, the demand cells attached
// to its nodes and the feasibility indicators z per (vehicle, cell).

#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include "rideshare/assignment.hpp"
#include "rideshare/common.hpp"
#include "rideshare/demand.hpp"
#include "rideshare/feasibility.hpp"
#include "rideshare/region_graph.hpp"
#include "rideshare/texpand.hpp"

namespace rideshare {

// k requests origin -> destination at a time-expanded node, with prob. p.
struct DemandCell {
  int node = 0;
  int layer = 0;
  RegionId origin = 0;
  RegionId destination = 0;
  int count = 1;
  double p = 0.0;

  double capacity() const { return count * p; }
};

// A routable vehicle: its time-expanded start and deadline window, the trip
// it carries and the slots already spent on that trip at layer 0.
struct DispatchVehicle {
  VehicleRoute route;
  TripSpec trip;
  int elapsed = 0;
};

class DispatchProblem {
 public:
  DispatchProblem() = default;

  // Cells must be sorted by (node, destination, count); z is [vehicle][cell].
  DispatchProblem(TimeExpandedGraph graph, std::vector<DemandCell> cells,
                  std::vector<std::vector<std::uint8_t>> z, int epoch_slot = 0)
      : graph_(std::move(graph)),
        cells_(std::move(cells)),
        z_(std::move(z)),
        epoch_slot_(epoch_slot) {
    if (static_cast<int>(z_.size()) != graph_.num_vehicles()) {
      fail_invalid("z must have one row per vehicle");
    }
    for (const auto& row : z_) {
      if (row.size() != cells_.size()) fail_invalid("z row size mismatch");
    }
    node_begin_.assign(graph_.num_nodes() + 1, 0);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const DemandCell& cell = cells_[c];
      if (cell.node < 0 || cell.node >= graph_.num_region_nodes()) {
        fail_invalid("demand cell ", c, " not on a region node");
      }
      if (c > 0) {
        const DemandCell& prev = cells_[c - 1];
        if (std::tuple(prev.node, prev.destination, prev.count) >=
            std::tuple(cell.node, cell.destination, cell.count)) {
          fail_invalid("demand cells must be sorted and unique");
        }
      }
      if (!(cell.p >= 0.0 && cell.p <= 1.0)) fail_invalid("cell probability out of range");
      ++node_begin_[cell.node + 1];
    }
    for (int n = 0; n < graph_.num_nodes(); ++n) node_begin_[n + 1] += node_begin_[n];
  }

  const TimeExpandedGraph& graph() const { return graph_; }
  int num_vehicles() const { return graph_.num_vehicles(); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  const std::vector<DemandCell>& cells() const { return cells_; }
  const DemandCell& cell(int c) const { return cells_[c]; }
  int epoch_slot() const { return epoch_slot_; }

  bool z(int vehicle, int c) const { return z_[vehicle][c] != 0; }
  const std::vector<std::uint8_t>& z_row(int vehicle) const { return z_[vehicle]; }

  // Cell index range [first, last) attached to node n.
  std::pair<int, int> cells_at(int n) const {
    if (n >= graph_.num_region_nodes()) return {num_cells(), num_cells()};
    return {node_begin_[n], node_begin_[n + 1]};
  }

  // z for (vehicle, layer, v, u): shared by every k of the same cell group.
  bool z_at(int vehicle, int layer, RegionId v, RegionId u) const {
    if (layer < 0 || layer > graph_.tau()) return false;
    auto [b, e] = cells_at(graph_.node(v, layer));
    for (int c = b; c < e; ++c) {
      if (cells_[c].destination == u) return z(vehicle, c);
    }
    return false;
  }

  double p_at(int layer, RegionId v, RegionId u, int k) const {
    if (layer < 0 || layer > graph_.tau()) return 0.0;
    auto [b, e] = cells_at(graph_.node(v, layer));
    for (int c = b; c < e; ++c) {
      if (cells_[c].destination == u && cells_[c].count == k) return cells_[c].p;
    }
    return 0.0;
  }

  // Largest p * z * k over all (vehicle, cell) pairs.
  double max_weighted_capacity() const {
    double best = 0.0;
    for (int i = 0; i < num_vehicles(); ++i) {
      for (int c = 0; c < num_cells(); ++c) {
        if (z(i, c)) best = std::max(best, cells_[c].capacity());
      }
    }
    return best;
  }

 private:
  TimeExpandedGraph graph_;
  std::vector<DemandCell> cells_;
  std::vector<std::vector<std::uint8_t>> z_;
  std::vector<int> node_begin_;
  int epoch_slot_ = 0;
};

// Builds the snapshot problem at absolute slot `epoch_slot`. A vehicle may
// pick up only at interior nodes of its route: never at its start node and
// never in its destination region, where the on-board trip ends.
inline DispatchProblem build_problem(const RegionGraph& region_graph,
                                     const DemandModel& demand, double alpha,
                                     std::span<const DispatchVehicle> vehicles,
                                     int epoch_slot, bool allow_waiting = false) {
  std::vector<VehicleRoute> routes;
  std::vector<TripSpec> trips;
  for (const auto& v : vehicles) {
    routes.push_back(v.route);
    trips.push_back(v.trip);
  }
  TimeExpandedGraph graph = TimeExpandedGraph::build(region_graph, routes, allow_waiting);
  const FeasibilityTable table = FeasibilityTable::build(region_graph, alpha, trips);

  std::vector<DemandCell> cells;
  for (int layer = 1; layer <= graph.tau(); ++layer) {
    const int slot = epoch_slot + layer;
    if (slot >= demand.horizon()) break;
    auto [begin, end] = demand.slot_range(slot);
    for (auto it = begin; it != end; ++it) {
      for (int k = 1; k <= demand.max_count(); ++k) {
        const double p = it->second[k - 1];
        if (p <= 0.0) continue;
        cells.push_back({graph.node(it->first.origin, layer), layer, it->first.origin,
                         it->first.destination, k, p});
      }
    }
  }
  std::sort(cells.begin(), cells.end(), [](const DemandCell& a, const DemandCell& b) {
    return std::tuple(a.node, a.destination, a.count) <
           std::tuple(b.node, b.destination, b.count);
  });

  std::vector<std::vector<std::uint8_t>> z(vehicles.size(),
                                           std::vector<std::uint8_t>(cells.size(), 0));
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const DispatchVehicle& v = vehicles[i];
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const DemandCell& cell = cells[c];
      if (cell.layer <= v.route.start_layer) continue;
      if (cell.origin == v.route.destination) continue;
      z[i][c] = table.z(static_cast<int>(i), v.elapsed + cell.layer, cell.origin,
                        cell.destination)
                    ? 1
                    : 0;
    }
  }
  return DispatchProblem(std::move(graph), std::move(cells), std::move(z), epoch_slot);
}

// A solution in either node form (y') or route form (y): one route per
// vehicle (time-expanded node sequence ending at its sink) and a dense
// [vehicle][cell] matrix of assignment probabilities.
struct JointSolution {
  std::vector<std::vector<int>> routes;
  std::vector<std::vector<double>> y;

  friend bool operator==(const JointSolution&, const JointSolution&) = default;
};

inline std::vector<std::uint8_t> route_mask(const DispatchProblem& problem,
                                            std::span<const int> route) {
  std::vector<std::uint8_t> mask(problem.graph().num_nodes(), 0);
  for (int n : route) mask[n] = 1;
  return mask;
}

// Route-form assignment vector keyed by absolute slot.
inline AssignmentVector to_assignment_vector(const DispatchProblem& problem,
                                             const JointSolution& sol) {
  AssignmentVector out;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    for (int c = 0; c < problem.num_cells(); ++c) {
      const double y = sol.y[i][c];
      if (y == 0.0) continue;
      const DemandCell& cell = problem.cell(c);
      out[{i, problem.epoch_slot() + cell.layer, cell.origin, cell.destination,
           cell.count}] = y;
    }
  }
  return out;
}

// Checks y against the feasible set, using the problem's p and z.
inline std::vector<AssignmentViolation> validate(const DispatchProblem& problem,
                                                 const JointSolution& sol) {
  const int epoch = problem.epoch_slot();
  ProbabilityLookup p = [&](int t, RegionId v, RegionId u, int k) {
    return problem.p_at(t - epoch, v, u, k);
  };
  FeasibilityLookup z = [&](int i, int t, RegionId v, RegionId u) {
    return problem.z_at(i, t - epoch, v, u);
  };
  return validate(to_assignment_vector(problem, sol), p, z);
}

}  // namespace rideshare
