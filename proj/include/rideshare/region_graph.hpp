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

// Road network ingestion, grid partition into regions and construction of
// the region graph with slot-valued fastest travel times.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/csv.hpp"

namespace rideshare {

struct RoadNode {
  std::int64_t id = 0;
  double x_km = 0.0;
  double y_km = 0.0;
};

struct RoadEdge {
  std::int64_t from = 0;
  std::int64_t to = 0;
  double distance_km = 0.0;
};

class RoadNetwork {
 public:
  RoadNetwork() = default;

  RoadNetwork(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!index_.emplace(nodes_[i].id, static_cast<int>(i)).second) {
        fail_invalid("duplicate road node id ", nodes_[i].id);
      }
    }
    adjacency_.resize(nodes_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const RoadEdge& edge = edges_[e];
      if (edge.from == edge.to) {
        fail_invalid("self-loop road edge at node ", edge.from);
      }
      if (!(edge.distance_km >= 0.0) || !std::isfinite(edge.distance_km)) {
        fail_invalid("road edge ", edge.from, "->", edge.to,
                     " has invalid distance ", edge.distance_km);
      }
      adjacency_[index_of(edge.from)].push_back(static_cast<int>(e));
      (void)index_of(edge.to);
    }
  }

  const std::vector<RoadNode>& nodes() const { return nodes_; }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  bool empty() const { return nodes_.empty(); }

  int index_of(std::int64_t id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail_invalid("unknown road node id ", id);
    return it->second;
  }

  std::span<const int> out_edges(int node_index) const {
    return adjacency_[node_index];
  }

 private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadEdge> edges_;
  std::unordered_map<std::int64_t, int> index_;
  std::vector<std::vector<int>> adjacency_;
};

// Loads `nodes.csv` (id,x_km,y_km) and `edges.csv` (from_id,to_id,distance_km).
inline RoadNetwork load_road_network(const std::string& nodes_path,
                                     const std::string& edges_path) {
  const csv::Table nt = csv::read_file(nodes_path, {"id", "x_km", "y_km"});
  const int c_id = nt.column("id");
  const int c_x = nt.column("x_km");
  const int c_y = nt.column("y_km");
  std::vector<RoadNode> nodes;
  nodes.reserve(nt.rows.size());
  for (const auto& row : nt.rows) {
    nodes.push_back({csv::to_int(row.fields[c_id], nodes_path, row.line),
                     csv::to_double(row.fields[c_x], nodes_path, row.line),
                     csv::to_double(row.fields[c_y], nodes_path, row.line)});
  }
  const csv::Table et =
      csv::read_file(edges_path, {"from_id", "to_id", "distance_km"});
  const int c_from = et.column("from_id");
  const int c_to = et.column("to_id");
  const int c_dist = et.column("distance_km");
  std::vector<RoadEdge> edges;
  edges.reserve(et.rows.size());
  for (const auto& row : et.rows) {
    edges.push_back({csv::to_int(row.fields[c_from], edges_path, row.line),
                     csv::to_int(row.fields[c_to], edges_path, row.line),
                     csv::to_double(row.fields[c_dist], edges_path, row.line)});
  }
  return RoadNetwork(std::move(nodes), std::move(edges));
}

// Travel time of a road segment in whole minutes, ceil(60 * d / speed).
inline int travel_minutes(double distance_km, double speed_kmh) {
  if (!(speed_kmh > 0.0)) fail_invalid("speed must be positive, got ", speed_kmh);
  if (!(distance_km >= 0.0)) {
    fail_invalid("distance must be nonnegative, got ", distance_km);
  }
  return ceil_slots(60.0 * distance_km / speed_kmh);
}

// Slots needed to cover `distance_km`: minutes first, then slots, both
// rounded up.
inline int travel_time_slots(double distance_km, double speed_kmh,
                             int slot_minutes) {
  if (!(distance_km > 0.0)) {
    fail_invalid("distance must be positive, got ", distance_km);
  }
  if (slot_minutes <= 0) fail_invalid("slot length must be positive");
  const int minutes = travel_minutes(distance_km, speed_kmh);
  return (minutes + slot_minutes - 1) / slot_minutes;
}

struct Region {
  RegionId id = 0;
  int cell_col = 0;
  int cell_row = 0;
  std::int64_t representative = 0;
  std::vector<std::int64_t> members;
};

// Equal-area rectangular partition anchored at the lower-left corner of the
// node bounding box. Empty cells are dropped; region ids follow (row, col).
inline std::vector<Region> partition_grid(const RoadNetwork& network,
                                          double cell_width_km,
                                          double cell_height_km) {
  if (network.empty()) fail_invalid("cannot partition an empty road network");
  if (!(cell_width_km > 0.0) || !(cell_height_km > 0.0)) {
    fail_invalid("cell dimensions must be positive");
  }
  double min_x = network.nodes().front().x_km;
  double min_y = network.nodes().front().y_km;
  for (const auto& n : network.nodes()) {
    min_x = std::min(min_x, n.x_km);
    min_y = std::min(min_y, n.y_km);
  }
  std::map<std::pair<int, int>, std::vector<const RoadNode*>> cells;
  for (const auto& n : network.nodes()) {
    const int col = static_cast<int>(std::floor((n.x_km - min_x) / cell_width_km));
    const int row = static_cast<int>(std::floor((n.y_km - min_y) / cell_height_km));
    cells[{row, col}].push_back(&n);
  }
  std::vector<Region> regions;
  regions.reserve(cells.size());
  for (auto& [key, members] : cells) {
    const auto [row, col] = key;
    const double cx = min_x + (col + 0.5) * cell_width_km;
    const double cy = min_y + (row + 0.5) * cell_height_km;
    Region region;
    region.id = static_cast<RegionId>(regions.size());
    region.cell_col = col;
    region.cell_row = row;
    std::sort(members.begin(), members.end(),
              [](const RoadNode* a, const RoadNode* b) { return a->id < b->id; });
    double best = std::numeric_limits<double>::infinity();
    for (const RoadNode* n : members) {
      region.members.push_back(n->id);
      const double d = std::hypot(n->x_km - cx, n->y_km - cy);
      if (d < best) {  // strict: lowest id wins ties
        best = d;
        region.representative = n->id;
      }
    }
    regions.push_back(std::move(region));
  }
  return regions;
}

// Single-source fastest times in minutes over the road network.
inline std::vector<int> road_minutes_from(const RoadNetwork& network,
                                          int source_index, double speed_kmh) {
  std::vector<int> dist(network.nodes().size(), kUnreachable);
  using Item = std::pair<int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source_index] = 0;
  heap.emplace(0, source_index);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d != dist[v]) continue;
    for (int e : network.out_edges(v)) {
      const RoadEdge& edge = network.edges()[e];
      const int w = network.index_of(edge.to);
      const int nd = d + travel_minutes(edge.distance_km, speed_kmh);
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

// Dense n x n matrix of slot counts; kUnreachable marks no path.
class TimeMatrix {
 public:
  TimeMatrix() = default;
  explicit TimeMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, kUnreachable) {
    for (int v = 0; v < n; ++v) at(v, v) = 0;
  }

  int size() const { return n_; }
  int& at(int u, int v) { return data_[static_cast<std::size_t>(u) * n_ + v]; }
  int at(int u, int v) const { return data_[static_cast<std::size_t>(u) * n_ + v]; }
  bool reachable(int u, int v) const { return at(u, v) < kUnreachable; }

  friend bool operator==(const TimeMatrix&, const TimeMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<int> data_;
};

// All-pairs fastest times between region representatives, in slots.
inline TimeMatrix representative_times(const RoadNetwork& network,
                                       std::span<const Region> regions,
                                       double speed_kmh, int slot_minutes) {
  if (slot_minutes <= 0) fail_invalid("slot length must be positive");
  const int n = static_cast<int>(regions.size());
  TimeMatrix t(n);
  for (int u = 0; u < n; ++u) {
    const auto minutes = road_minutes_from(
        network, network.index_of(regions[u].representative), speed_kmh);
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const int m = minutes[network.index_of(regions[v].representative)];
      if (m >= kUnreachable) continue;
      t.at(u, v) = std::max(1, (m + slot_minutes - 1) / slot_minutes);
    }
  }
  return t;
}

struct RegionEdge {
  RegionId from = 0;
  RegionId to = 0;
  int delta = 1;

  friend bool operator==(const RegionEdge&, const RegionEdge&) = default;
};

// Edge (u,v) is kept iff T(u,v) <= eta * (T(u,k) + T(k,v)) for every region
// k other than u and v. Pairs through an unreachable k impose no constraint.
inline std::vector<RegionEdge> select_detour_edges(const TimeMatrix& times,
                                                   double eta_detour) {
  if (!(eta_detour > 0.0 && eta_detour <= 1.0)) {
    fail_invalid("eta_detour must lie in (0, 1], got ", eta_detour);
  }
  const int n = times.size();
  std::vector<RegionEdge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || !times.reachable(u, v)) continue;
      bool keep = true;
      for (int k = 0; k < n && keep; ++k) {
        if (k == u || k == v) continue;
        if (!times.reachable(u, k) || !times.reachable(k, v)) continue;
        const double via = static_cast<double>(times.at(u, k)) + times.at(k, v);
        if (static_cast<double>(times.at(u, v)) > eta_detour * via + kCeilSlack) {
          keep = false;
        }
      }
      if (keep) edges.push_back({u, v, times.at(u, v)});
    }
  }
  return edges;
}

class RegionGraph {
 public:
  RegionGraph() = default;

  // Region graph given directly by its edges; the fastest-time matrix is the
  // shortest-path closure of the edges.
  static RegionGraph from_edges(int num_regions, std::vector<RegionEdge> edges) {
    std::vector<Region> regions(num_regions);
    for (int v = 0; v < num_regions; ++v) {
      regions[v].id = v;
      regions[v].representative = v;
      regions[v].members = {v};
    }
    RegionGraph g;
    g.regions_ = std::move(regions);
    g.edges_ = std::move(edges);
    g.finalize();
    g.fastest_ = g.distance_;
    return g;
  }

  static RegionGraph from_parts(std::vector<Region> regions,
                                std::vector<RegionEdge> edges, TimeMatrix fastest) {
    RegionGraph g;
    g.regions_ = std::move(regions);
    g.edges_ = std::move(edges);
    g.fastest_ = std::move(fastest);
    g.finalize();
    return g;
  }

  int num_regions() const { return static_cast<int>(regions_.size()); }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<RegionEdge>& edges() const { return edges_; }
  std::span<const int> out_edges(RegionId v) const { return adjacency_[v]; }

  // Fastest time between representatives on the road network (T).
  const TimeMatrix& fastest_times() const { return fastest_; }
  // Fastest time when moving along region-graph edges; this is what a vehicle
  // can actually achieve and what deadlines and plans are measured in.
  const TimeMatrix& route_times() const { return distance_; }
  int travel_time(RegionId u, RegionId v) const { return distance_.at(u, v); }
  bool reachable(RegionId u, RegionId v) const { return distance_.reachable(u, v); }

  // Fastest region sequence u..v; ties broken toward the smallest next
  // region id, which makes the sequence lexicographically smallest.
  std::vector<RegionId> fastest_path(RegionId u, RegionId v) const {
    if (!reachable(u, v)) fail_invalid("region ", v, " unreachable from ", u);
    std::vector<RegionId> path{u};
    RegionId cur = u;
    while (cur != v) {
      RegionId next = -1;
      for (int e : sorted_out_[cur]) {
        const RegionEdge& edge = edges_[e];
        if (!reachable(edge.to, v)) continue;
        if (edge.delta + travel_time(edge.to, v) == travel_time(cur, v)) {
          next = edge.to;
          break;
        }
      }
      path.push_back(next);
      cur = next;
    }
    return path;
  }

 private:
  void finalize() {
    const int n = num_regions();
    adjacency_.assign(n, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const RegionEdge& edge = edges_[e];
      if (edge.from < 0 || edge.from >= n || edge.to < 0 || edge.to >= n) {
        fail_invalid("region edge ", edge.from, "->", edge.to, " out of range");
      }
      if (edge.from == edge.to) fail_invalid("region self-loop at ", edge.from);
      if (edge.delta < 1) {
        fail_invalid("region edge ", edge.from, "->", edge.to,
                     " must take at least one slot");
      }
      adjacency_[edge.from].push_back(static_cast<int>(e));
    }
    sorted_out_ = adjacency_;
    for (auto& list : sorted_out_) {
      std::sort(list.begin(), list.end(), [&](int a, int b) {
        return std::pair(edges_[a].to, edges_[a].delta) <
               std::pair(edges_[b].to, edges_[b].delta);
      });
    }
    distance_ = TimeMatrix(n);
    for (const auto& edge : edges_) {
      distance_.at(edge.from, edge.to) =
          std::min(distance_.at(edge.from, edge.to), edge.delta);
    }
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        if (!distance_.reachable(i, k)) continue;
        for (int j = 0; j < n; ++j) {
          if (!distance_.reachable(k, j)) continue;
          distance_.at(i, j) =
              std::min(distance_.at(i, j), distance_.at(i, k) + distance_.at(k, j));
        }
      }
    }
  }

  std::vector<Region> regions_;
  std::vector<RegionEdge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> sorted_out_;
  TimeMatrix fastest_;
  TimeMatrix distance_;
};

inline RegionGraph build_region_graph(const RoadNetwork& network,
                                      std::vector<Region> regions,
                                      double eta_detour, double speed_kmh,
                                      int slot_minutes) {
  if (!(eta_detour > 0.0 && eta_detour <= 1.0)) {
    fail_invalid("eta_detour must lie in (0, 1], got ", eta_detour);
  }
  TimeMatrix times = representative_times(network, regions, speed_kmh, slot_minutes);
  auto edges = select_detour_edges(times, eta_detour);
  return RegionGraph::from_parts(std::move(regions), std::move(edges),
                                 std::move(times));
}

// Diagnostic: slots needed from each representative to its farthest member.
// Regions are meant to be small enough that this stays within a few slots.
inline std::vector<int> intra_region_reach(const RoadNetwork& network,
                                           std::span<const Region> regions,
                                           double speed_kmh, int slot_minutes) {
  std::vector<int> out;
  out.reserve(regions.size());
  for (const auto& region : regions) {
    const auto minutes = road_minutes_from(
        network, network.index_of(region.representative), speed_kmh);
    int worst = 0;
    for (auto member : region.members) {
      const int m = minutes[network.index_of(member)];
      worst = std::max(worst, m >= kUnreachable
                                  ? kUnreachable
                                  : (m + slot_minutes - 1) / slot_minutes);
    }
    out.push_back(worst);
  }
  return out;
}

}  // namespace rideshare
