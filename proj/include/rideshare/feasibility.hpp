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

// Ride-sharing feasibility: can a vehicle carrying one passenger (s -> d)
// that is passing region v pick up a new passenger v -> u and still deliver
// both before their deadlines?

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/region_graph.hpp"

namespace rideshare {

// Deadline in slots for a trip whose fastest time is `fastest_slots`.
inline int deadline_slots(int fastest_slots, double alpha) {
  if (!(alpha >= 1.0)) fail_invalid("delay tolerance factor must be >= 1, got ", alpha);
  if (fastest_slots < 0) fail_invalid("negative travel time");
  return ceil_slots(alpha * fastest_slots);
}

// ceil(alpha * delta(v, u)); nullopt when u is unreachable from v.
inline std::optional<int> deadline(RegionId v, RegionId u, double alpha,
                                   const RegionGraph& graph) {
  if (!graph.reachable(v, u)) return std::nullopt;
  return deadline_slots(graph.travel_time(v, u), alpha);
}

// A passenger already on board: trip origin, destination and its deadline
// (for a roaming vehicle, the self-selected deadline of the virtual trip).
struct TripSpec {
  RegionId origin = 0;
  RegionId destination = 0;
  int deadline = 0;

  friend bool operator==(const TripSpec&, const TripSpec&) = default;
};

inline TripSpec make_trip(RegionId origin, RegionId destination, double alpha,
                          const RegionGraph& graph) {
  auto d = deadline(origin, destination, alpha, graph);
  if (!d) fail_invalid("destination ", destination, " unreachable from ", origin);
  return {origin, destination, *d};
}

enum class PlanOrder : std::uint8_t {
  kNone = 0,
  kPickupFirst = 1,  // v -> u -> d
  kDropFirst = 2,    // v -> d -> u
};

struct SharePlan {
  PlanOrder order = PlanOrder::kNone;
  int to_new_destination = 0;       // slots from v until u is reached
  int to_existing_destination = 0;  // slots from v until d is reached
  int total = 0;                    // slots from v until both are delivered

  friend bool operator==(const SharePlan&, const SharePlan&) = default;
};

// Leg times of `order` over fastest paths; nullopt when a leg is unreachable.
inline std::optional<SharePlan> plan_legs(PlanOrder order, RegionId v, RegionId u,
                                          RegionId d, const RegionGraph& graph) {
  SharePlan plan;
  plan.order = order;
  if (order == PlanOrder::kPickupFirst) {
    if (!graph.reachable(v, u) || !graph.reachable(u, d)) return std::nullopt;
    plan.to_new_destination = graph.travel_time(v, u);
    plan.to_existing_destination = plan.to_new_destination + graph.travel_time(u, d);
    plan.total = plan.to_existing_destination;
  } else if (order == PlanOrder::kDropFirst) {
    if (!graph.reachable(v, d) || !graph.reachable(d, u)) return std::nullopt;
    plan.to_existing_destination = graph.travel_time(v, d);
    plan.to_new_destination = plan.to_existing_destination + graph.travel_time(d, u);
    plan.total = plan.to_new_destination;
  } else {
    return std::nullopt;
  }
  return plan;
}

// Checks both candidate orders against the new trip's deadline and the
// remaining budget of the on-board trip (`elapsed` slots already spent).
// Among feasible orders the shorter one wins; ties deliver the on-board
// passenger first.
inline std::optional<SharePlan> check_plan(const TripSpec& trip, RegionId v,
                                           RegionId u, int elapsed,
                                           const RegionGraph& graph,
                                           double alpha) {
  if (u == v) return std::nullopt;
  const auto new_deadline = deadline(v, u, alpha, graph);
  if (!new_deadline) return std::nullopt;
  std::optional<SharePlan> best;
  for (PlanOrder order : {PlanOrder::kDropFirst, PlanOrder::kPickupFirst}) {
    auto plan = plan_legs(order, v, u, trip.destination, graph);
    if (!plan) continue;
    if (plan->to_new_destination > *new_deadline) continue;
    if (elapsed + plan->to_existing_destination > trip.deadline) continue;
    if (!best || plan->total < best->total) best = plan;
  }
  return best;
}

inline std::optional<SharePlan> check_plan(RegionId s, RegionId d, RegionId v,
                                           RegionId u, int elapsed,
                                           const RegionGraph& graph,
                                           double alpha) {
  auto trip_deadline = deadline(s, d, alpha, graph);
  if (!trip_deadline) return std::nullopt;
  return check_plan(TripSpec{s, d, *trip_deadline}, v, u, elapsed, graph, alpha);
}

// Precomputed z indicators and witnessing plan orders, one block per
// vehicle trip, covering every (v, u) and every elapsed in [0, deadline].
class FeasibilityTable {
 public:
  FeasibilityTable() = default;

  static FeasibilityTable build(const RegionGraph& graph, double alpha,
                                std::span<const TripSpec> trips) {
    FeasibilityTable table;
    table.alpha_ = alpha;
    table.num_regions_ = graph.num_regions();
    table.trips_.assign(trips.begin(), trips.end());
    const int n = graph.num_regions();
    for (const TripSpec& trip : trips) {
      if (trip.deadline < 0) fail_invalid("negative trip deadline");
      std::vector<PlanOrder> block(
          static_cast<std::size_t>(trip.deadline + 1) * n * n, PlanOrder::kNone);
      for (int elapsed = 0; elapsed <= trip.deadline; ++elapsed) {
        for (int v = 0; v < n; ++v) {
          for (int u = 0; u < n; ++u) {
            if (auto plan = check_plan(trip, v, u, elapsed, graph, alpha)) {
              block[(static_cast<std::size_t>(elapsed) * n + v) * n + u] = plan->order;
            }
          }
        }
      }
      table.orders_.push_back(std::move(block));
    }
    return table;
  }

  static FeasibilityTable build(const RegionGraph& graph, double alpha,
                                std::span<const std::pair<RegionId, RegionId>> od) {
    std::vector<TripSpec> trips;
    for (auto [s, d] : od) trips.push_back(make_trip(s, d, alpha, graph));
    return build(graph, alpha, trips);
  }

  int num_trips() const { return static_cast<int>(trips_.size()); }
  const TripSpec& trip(int i) const { return trips_.at(i); }
  double alpha() const { return alpha_; }
  std::size_t num_entries(int i) const { return orders_.at(i).size(); }

  PlanOrder order(int i, int elapsed, RegionId v, RegionId u) const {
    const auto& block = orders_.at(i);
    if (elapsed < 0 || elapsed > trips_[i].deadline) return PlanOrder::kNone;
    return block[(static_cast<std::size_t>(elapsed) * num_regions_ + v) *
                     num_regions_ + u];
  }

  bool z(int i, int elapsed, RegionId v, RegionId u) const {
    return order(i, elapsed, v, u) != PlanOrder::kNone;
  }

  std::optional<SharePlan> plan(int i, int elapsed, RegionId v, RegionId u,
                                const RegionGraph& graph) const {
    const PlanOrder o = order(i, elapsed, v, u);
    if (o == PlanOrder::kNone) return std::nullopt;
    return plan_legs(o, v, u, trips_[i].destination, graph);
  }

 private:
  double alpha_ = 1.0;
  int num_regions_ = 0;
  std::vector<TripSpec> trips_;
  std::vector<std::vector<PlanOrder>> orders_;
};

}  // namespace rideshare
