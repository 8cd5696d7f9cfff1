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

// Time-expanded region graph. One node per (region, slot) for slots
// 0..tau plus one virtual sink per vehicle; region edges become edges
// between layers, so every route is a path in a DAG and deadlines are
// enforced by which destination layers connect to the sink.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/region_graph.hpp"

namespace rideshare {

// A vehicle as seen by one optimization: it is (or will next be) in region
// `start` at layer `start_layer` and must reach `destination` at a layer in
// [1, budget].
struct VehicleRoute {
  RegionId start = 0;
  int start_layer = 0;
  RegionId destination = 0;
  int budget = 0;

  friend bool operator==(const VehicleRoute&, const VehicleRoute&) = default;
};

struct GraphStats {
  int tau = 0;
  int region_nodes = 0;
  int sinks = 0;
  int region_edges = 0;
  int sink_edges = 0;
};

class TimeExpandedGraph {
 public:
  TimeExpandedGraph() = default;

  static TimeExpandedGraph build(const RegionGraph& graph,
                                 std::span<const VehicleRoute> vehicles,
                                 bool allow_waiting = false) {
    TimeExpandedGraph g;
    g.num_regions_ = graph.num_regions();
    g.vehicles_.assign(vehicles.begin(), vehicles.end());
    g.allow_waiting_ = allow_waiting;
    g.tau_ = 0;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      const VehicleRoute& v = vehicles[i];
      if (v.start < 0 || v.start >= g.num_regions_ || v.destination < 0 ||
          v.destination >= g.num_regions_) {
        fail_invalid("vehicle ", i, ": region out of range");
      }
      if (v.budget < 1) fail_invalid("vehicle ", i, ": deadline budget must be >= 1");
      if (v.start_layer < 0) fail_invalid("vehicle ", i, ": negative start layer");
      if (v.start == v.destination && v.start_layer == 0) {
        fail_invalid("vehicle ", i, ": source equals destination");
      }
      const bool reach =
          graph.reachable(v.start, v.destination) &&
          v.start_layer + graph.travel_time(v.start, v.destination) <= v.budget &&
          std::max(1, v.start_layer) <= v.budget;
      if (!reach) {
        fail_invalid("vehicle ", i, ": destination ", v.destination,
                     " unreachable within its deadline");
      }
      g.tau_ = std::max(g.tau_, v.budget);
    }
    const int layers = g.tau_ + 1;
    const int region_nodes = layers * g.num_regions_;
    g.successors_.assign(region_nodes + vehicles.size(), {});
    for (int t = 0; t < layers; ++t) {
      for (int u = 0; u < g.num_regions_; ++u) {
        auto& succ = g.successors_[g.node(u, t)];
        for (int e : graph.out_edges(u)) {
          const RegionEdge& edge = graph.edges()[e];
          if (t + edge.delta <= g.tau_) succ.push_back(g.node(edge.to, t + edge.delta));
        }
        if (allow_waiting && t + 1 <= g.tau_) succ.push_back(g.node(u, t + 1));
      }
    }
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      for (int t = 1; t <= vehicles[i].budget; ++t) {
        g.successors_[g.node(vehicles[i].destination, t)].push_back(
            g.sink(static_cast<int>(i)));
      }
    }
    for (auto& succ : g.successors_) {
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    return g;
  }

  int num_regions() const { return num_regions_; }
  int tau() const { return tau_; }
  int num_vehicles() const { return static_cast<int>(vehicles_.size()); }
  int num_region_nodes() const { return (tau_ + 1) * num_regions_; }
  int num_nodes() const { return static_cast<int>(successors_.size()); }
  bool allow_waiting() const { return allow_waiting_; }
  const VehicleRoute& vehicle(int i) const { return vehicles_.at(i); }

  int node(RegionId v, int t) const { return t * num_regions_ + v; }
  int sink(int vehicle) const { return num_region_nodes() + vehicle; }
  bool is_sink(int n) const { return n >= num_region_nodes(); }
  RegionId region_of(int n) const {
    return is_sink(n) ? vehicles_[n - num_region_nodes()].destination
                      : n % num_regions_;
  }
  int layer_of(int n) const { return is_sink(n) ? tau_ + 1 : n / num_regions_; }

  int start_node(int vehicle) const {
    return node(vehicles_[vehicle].start, vehicles_[vehicle].start_layer);
  }

  std::span<const int> successors(int n) const { return successors_[n]; }

  // Successors available to one vehicle: its route ends at the first arrival
  // in its destination region, and other vehicles' sinks are off limits.
  std::vector<int> vehicle_successors(int vehicle, int n) const {
    std::vector<int> out;
    if (is_sink(n)) return out;
    const VehicleRoute& v = vehicles_[vehicle];
    if (region_of(n) == v.destination && layer_of(n) >= 1) {
      if (layer_of(n) <= v.budget) out.push_back(sink(vehicle));
      return out;
    }
    for (int s : successors_[n]) {
      if (!is_sink(s)) out.push_back(s);
    }
    return out;
  }

  GraphStats stats() const {
    GraphStats s;
    s.tau = tau_;
    s.region_nodes = num_region_nodes();
    s.sinks = num_vehicles();
    for (int n = 0; n < num_nodes(); ++n) {
      for (int m : successors_[n]) (is_sink(m) ? s.sink_edges : s.region_edges)++;
    }
    return s;
  }

  // Every edge either moves forward in time or enters a sink.
  bool is_acyclic() const {
    for (int n = 0; n < num_nodes(); ++n) {
      for (int m : successors_[n]) {
        if (!is_sink(m) && layer_of(m) <= layer_of(n)) return false;
        if (is_sink(n)) return false;
      }
    }
    return true;
  }

 private:
  int num_regions_ = 0;
  int tau_ = 0;
  bool allow_waiting_ = false;
  std::vector<VehicleRoute> vehicles_;
  std::vector<std::vector<int>> successors_;
};

// x_{i, n} = 1 iff vehicle i's route passes node n (start and sink included).
struct RouteIndicator {
  std::vector<std::uint8_t> x;

  friend bool operator==(const RouteIndicator&, const RouteIndicator&) = default;
};

inline void check_route(const TimeExpandedGraph& g, int vehicle,
                        std::span<const int> route) {
  if (route.size() < 2) fail_invalid("route too short");
  if (route.front() != g.start_node(vehicle)) {
    fail_invalid("route does not start at vehicle ", vehicle, "'s start node");
  }
  if (route.back() != g.sink(vehicle)) {
    fail_invalid("route does not end at vehicle ", vehicle, "'s sink");
  }
  for (std::size_t j = 0; j + 1 < route.size(); ++j) {
    const auto succ = g.vehicle_successors(vehicle, route[j]);
    if (std::find(succ.begin(), succ.end(), route[j + 1]) == succ.end()) {
      fail_invalid("route step ", route[j], " -> ", route[j + 1], " is not an edge");
    }
  }
}

inline RouteIndicator route_to_indicator(const TimeExpandedGraph& g, int vehicle,
                                         std::span<const int> route) {
  check_route(g, vehicle, route);
  RouteIndicator ind;
  ind.x.assign(g.num_nodes(), 0);
  for (int n : route) ind.x[n] = 1;
  return ind;
}

// Inverse of route_to_indicator. Because every step moves to a later layer,
// a valid indicator has exactly one marked successor at each step.
inline std::vector<int> indicator_to_route(const TimeExpandedGraph& g, int vehicle,
                                           const RouteIndicator& ind) {
  if (static_cast<int>(ind.x.size()) != g.num_nodes()) {
    fail_invalid("indicator size mismatch");
  }
  std::vector<int> seen_layer(g.tau() + 2, 0);
  int marked = 0;
  for (int n = 0; n < g.num_nodes(); ++n) {
    if (!ind.x[n]) continue;
    ++marked;
    if (++seen_layer[g.layer_of(n)] > 1) {
      fail_invalid("indicator marks two nodes in layer ", g.layer_of(n));
    }
  }
  std::vector<int> route;
  int cur = g.start_node(vehicle);
  if (!ind.x[cur]) fail_invalid("indicator does not mark the start node");
  route.push_back(cur);
  while (cur != g.sink(vehicle)) {
    int next = -1;
    for (int s : g.vehicle_successors(vehicle, cur)) {
      if (!ind.x[s]) continue;
      if (next >= 0) fail_invalid("indicator branches at node ", cur);
      next = s;
    }
    if (next < 0) fail_invalid("indicator is disconnected after node ", cur);
    route.push_back(next);
    cur = next;
  }
  if (static_cast<int>(route.size()) != marked) {
    fail_invalid("indicator marks nodes off the route");
  }
  return route;
}

}  // namespace rideshare
