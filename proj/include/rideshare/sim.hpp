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

// Slot-by-slot fleet simulator. Each slot: vehicles advance along their
// plans, passengers reaching their destination are dropped off, demand is
// realized and assigned, and the fleet is re-planned if some vehicle
// changed state.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rideshare/assignment.hpp"
#include "rideshare/common.hpp"
#include "rideshare/demand.hpp"
#include "rideshare/feasibility.hpp"
#include "rideshare/problem.hpp"
#include "rideshare/region_graph.hpp"
#include "rideshare/solver.hpp"

namespace rideshare {

enum class Scheme { kJoint, kIndependent, kFastest };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kJoint: return "joint";
    case Scheme::kIndependent: return "independent";
    case Scheme::kFastest: return "fastest";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "joint") return Scheme::kJoint;
  if (name == "independent") return Scheme::kIndependent;
  if (name == "fastest") return Scheme::kFastest;
  fail_invalid("unknown scheme '", name, "'");
}

enum class VehicleMode { kTwoOnBoard, kOneOnBoard, kEmptyRoaming };

struct OnBoardTrip {
  TripSpec trip;
  int pickup_slot = 0;
  bool is_virtual = false;  // hot-spot target of a roaming vehicle

  int elapsed(int slot) const { return slot - pickup_slot; }
};

struct Waypoint {
  RegionId region = 0;
  int slot = 0;  // arrival slot
};

struct VehicleState {
  int id = 0;
  VehicleMode mode = VehicleMode::kOneOnBoard;
  RegionId region = 0;  // last region reached
  int region_slot = 0;  // slot it was reached
  std::vector<OnBoardTrip> trips;
  std::deque<Waypoint> plan;

  int real_passengers() const {
    return static_cast<int>(std::count_if(trips.begin(), trips.end(),
                                          [](const OnBoardTrip& t) { return !t.is_virtual; }));
  }
};

// Vehicle sources, destinations and the slot of the first pickup.
struct Instance {
  std::vector<RegionId> sources;
  std::vector<RegionId> destinations;
  int start_slot = 0;
};

struct ServiceRecord {
  int vehicle = 0;
  RegionId origin = 0;
  RegionId destination = 0;
  int pickup_slot = 0;
  int delivery_slot = -1;
  int deadline = 0;
};

struct EpisodeMetrics {
  Scheme scheme = Scheme::kJoint;
  std::uint64_t seed = 0;
  int instance_id = 0;
  int pickups = 0;
  int epochs = 0;
  bool converged = true;
  std::vector<int> pickups_per_slot;  // indexed from the start slot
  std::vector<ServiceRecord> service_log;
};

struct SimConfig {
  double alpha = 1.3;
  SolverConfig solver;
  int hot_spot_lookahead = 6;
  double hot_spot_deadline_factor = 2.0;
  int episode_slots = 0;  // 0: twice the longest initial deadline
  bool allow_waiting = false;
};

// Region with the largest expected request mass over the next `lookahead`
// slots, among regions reachable from `current`. Ties go to the nearest
// region, then the smallest id.
inline std::pair<RegionId, int> select_hot_spot(const RegionGraph& graph,
                                                const DemandModel& demand,
                                                RegionId current, int slot,
                                                int lookahead, double deadline_factor) {
  RegionId best = -1;
  double best_mass = -1.0;
  for (RegionId r = 0; r < graph.num_regions(); ++r) {
    if (r == current || !graph.reachable(current, r)) continue;
    double mass = 0.0;
    for (int t = slot + 1; t <= slot + lookahead && t < demand.horizon(); ++t) {
      mass += demand.expected_outflow(t, r);
    }
    const bool better =
        best < 0 || mass > best_mass + kObjectiveTol ||
        (mass >= best_mass - kObjectiveTol &&
         graph.travel_time(current, r) < graph.travel_time(current, best));
    if (better) {
      best = r;
      best_mass = mass;
    }
  }
  if (best < 0) return {-1, 0};
  const int deadline =
      std::max(1, ceil_slots(deadline_factor * graph.travel_time(current, best)));
  return {best, deadline};
}

namespace detail {

class Episode {
 public:
  Episode(const RegionGraph& graph, const DemandModel& demand, const Instance& instance,
          Scheme scheme, std::uint64_t seed, const SimConfig& config)
      : graph_(graph),
        demand_(demand),
        scheme_(scheme),
        seed_(seed),
        config_(config),
        assign_rng_(mix_seed(seed, 0xA551'9000ull)) {
    const std::size_t n = instance.sources.size();
    if (n == 0 || instance.destinations.size() != n) {
      fail_invalid("instance needs matching, non-empty source and destination lists");
    }
    if (instance.start_slot < 0 || instance.start_slot >= demand.horizon()) {
      fail_invalid("instance start slot ", instance.start_slot, " outside the horizon");
    }
    start_ = instance.start_slot;
    int longest = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const RegionId s = instance.sources[i];
      const RegionId d = instance.destinations[i];
      if (s < 0 || s >= graph.num_regions() || d < 0 || d >= graph.num_regions() || s == d) {
        fail_invalid("vehicle ", i, ": invalid source/destination pair");
      }
      VehicleState v;
      v.id = static_cast<int>(i);
      v.mode = VehicleMode::kOneOnBoard;
      v.region = s;
      v.region_slot = start_;
      v.trips.push_back({make_trip(s, d, config.alpha, graph), start_, false});
      longest = std::max(longest, v.trips.back().trip.deadline);
      vehicles_.push_back(std::move(v));
      metrics_.service_log.push_back({static_cast<int>(i), s, d, start_, -1,
                                      vehicles_.back().trips.back().trip.deadline});
      open_record_.push_back({static_cast<int>(metrics_.service_log.size()) - 1});
    }
    const int length = config.episode_slots > 0 ? config.episode_slots : 2 * longest;
    end_ = std::min(demand.horizon() - 1, start_ + length);
    metrics_.scheme = scheme;
    metrics_.seed = seed;
    metrics_.pickups_per_slot.assign(end_ - start_ + 1, 0);
    y_.assign(n, {});
  }

  EpisodeMetrics run() {
    replan(start_);
    for (int t = start_ + 1; t <= end_; ++t) step(t);
    return std::move(metrics_);
  }

 private:
  bool at_waypoint(const VehicleState& v, int t) const {
    return !v.plan.empty() && v.plan.front().slot == t;
  }

  void step(int t) {
    bool trigger = false;
    std::vector<char> busy(vehicles_.size(), 0);

    for (VehicleState& v : vehicles_) {
      if (!at_waypoint(v, t)) continue;
      v.region = v.plan.front().region;
      v.region_slot = t;
      v.plan.pop_front();
      // Drop off everyone (real or virtual) whose destination is here.
      const std::size_t before = v.trips.size();
      for (auto it = v.trips.begin(); it != v.trips.end();) {
        if (it->trip.destination != v.region) {
          ++it;
          continue;
        }
        if (it->elapsed(t) > it->trip.deadline) {
          throw std::logic_error(str_cat("vehicle ", v.id, " missed a deadline at slot ", t));
        }
        if (!it->is_virtual) close_record(v.id, *it, t);
        it = v.trips.erase(it);
      }
      if (v.trips.size() != before) {
        busy[v.id] = 1;
        trigger = true;
        update_mode(v);
        v.plan.clear();
      }
    }

    const Realization realized = sample_realization(demand_, t, mix_seed(seed_, t));
    for (const auto& [od, count] : realized) {
      assign_event(t, od.first, od.second, count, busy, trigger);
    }

    if (trigger) replan(t);
    for (const VehicleState& v : vehicles_) {
      if (v.plan.empty()) {
        throw std::logic_error(str_cat("vehicle ", v.id, " has no plan after slot ", t));
      }
    }
  }

  void update_mode(VehicleState& v) {
    const int real = v.real_passengers();
    if (real >= 2) {
      v.mode = VehicleMode::kTwoOnBoard;
    } else if (real == 1) {
      std::erase_if(v.trips, [](const OnBoardTrip& trip) { return trip.is_virtual; });
      v.mode = VehicleMode::kOneOnBoard;
    } else {
      v.mode = VehicleMode::kEmptyRoaming;
    }
  }

  void close_record(int vehicle, const OnBoardTrip& trip, int t) {
    for (int idx : open_record_[vehicle]) {
      ServiceRecord& r = metrics_.service_log[idx];
      if (r.delivery_slot < 0 && r.origin == trip.trip.origin &&
          r.destination == trip.trip.destination && r.pickup_slot == trip.pickup_slot) {
        r.delivery_slot = t;
        std::erase(open_record_[vehicle], idx);
        return;
      }
    }
  }

  // Vehicles that could take a new passenger at region v in slot t.
  bool can_serve(const VehicleState& v, int t, RegionId origin, RegionId destination,
                 const std::vector<char>& busy) const {
    if (busy[v.id] || v.mode == VehicleMode::kTwoOnBoard) return false;
    if (v.region != origin || v.region_slot != t) return false;
    const OnBoardTrip& lead = v.trips.front();
    return check_plan(lead.trip, origin, destination, lead.elapsed(t), graph_, config_.alpha)
        .has_value();
  }

  double planned_y(int vehicle, int t, RegionId origin, RegionId destination, int k) const {
    auto it = y_[vehicle].find({vehicle, t, origin, destination, k});
    return it == y_[vehicle].end() ? 0.0 : it->second;
  }

  void assign_event(int t, RegionId origin, RegionId destination, int count,
                    std::vector<char>& busy, bool& trigger) {
    const int n = static_cast<int>(vehicles_.size());
    const double p = demand_.probability(t, origin, destination, count);
    const double eta = assign_rng_.uniform();
    std::vector<int> chosen;
    if (scheme_ == Scheme::kJoint) {
      std::vector<double> y(n, 0.0);
      std::vector<std::uint8_t> z(n, 0);
      for (int i = 0; i < n; ++i) {
        if (!can_serve(vehicles_[i], t, origin, destination, busy)) continue;
        y[i] = planned_y(i, t, origin, destination, count);
        z[i] = y[i] > 0.0;
      }
      chosen = draw_at(build_wheel(y, p, z), eta);
    } else {
      std::vector<int> takers;
      bool first = true;
      for (int i = 0; i < n; ++i) {
        if (!can_serve(vehicles_[i], t, origin, destination, busy)) continue;
        if (scheme_ == Scheme::kFastest) {
          takers.push_back(i);
          continue;
        }
        const double y = planned_y(i, t, origin, destination, count);
        if (y <= 0.0) continue;
        const double q = std::min(y / p, 1.0);
        const double u = first ? eta : assign_rng_.uniform();
        first = false;
        if (u < q || q >= 1.0) takers.push_back(i);
      }
      // Uniform choice of at most `count` takers.
      while (static_cast<int>(chosen.size()) < count && !takers.empty()) {
        const std::size_t pick =
            takers.size() == 1 ? 0 : assign_rng_.below(takers.size());
        chosen.push_back(takers[pick]);
        takers.erase(takers.begin() + static_cast<std::ptrdiff_t>(pick));
      }
      std::sort(chosen.begin(), chosen.end());
    }
    if (static_cast<int>(chosen.size()) > count) {
      throw std::logic_error("more vehicles assigned than requests realized");
    }
    for (int i : chosen) pick_up(vehicles_[i], t, origin, destination, busy, trigger);
  }

  void pick_up(VehicleState& v, int t, RegionId origin, RegionId destination,
               std::vector<char>& busy, bool& trigger) {
    const OnBoardTrip lead = v.trips.front();
    const auto plan =
        check_plan(lead.trip, origin, destination, lead.elapsed(t), graph_, config_.alpha);
    if (!plan) throw std::logic_error("assigned an infeasible request");
    busy[v.id] = 1;
    ++metrics_.pickups;
    ++metrics_.pickups_per_slot[t - start_];
    const OnBoardTrip rider{make_trip(origin, destination, config_.alpha, graph_), t, false};
    metrics_.service_log.push_back({v.id, origin, destination, t, -1, rider.trip.deadline});
    open_record_[v.id].push_back(static_cast<int>(metrics_.service_log.size()) - 1);
    y_[v.id].clear();
    if (v.mode == VehicleMode::kEmptyRoaming) {
      v.trips.clear();
      v.trips.push_back(rider);
      v.mode = VehicleMode::kOneOnBoard;
      v.plan.clear();
      trigger = true;
      return;
    }
    v.trips.push_back(rider);
    v.mode = VehicleMode::kTwoOnBoard;
    v.plan.clear();
    if (plan->order == PlanOrder::kPickupFirst) {
      append_fastest(v, origin, t, destination);
      append_fastest(v, destination, v.plan.back().slot, lead.trip.destination);
    } else {
      append_fastest(v, origin, t, lead.trip.destination);
      append_fastest(v, lead.trip.destination, v.plan.back().slot, destination);
    }
  }

  void append_fastest(VehicleState& v, RegionId from, int slot, RegionId to) {
    const auto path = graph_.fastest_path(from, to);
    for (std::size_t j = 1; j < path.size(); ++j) {
      slot += graph_.travel_time(path[j - 1], path[j]);
      v.plan.push_back({path[j], slot});
    }
  }

  // Next region/slot from which a new plan can start.
  std::pair<RegionId, int> anchor(const VehicleState& v, int t) const {
    if (v.region_slot == t || v.plan.empty()) return {v.region, 0};
    return {v.plan.front().region, v.plan.front().slot - t};
  }

  void replan(int t) {
    ++metrics_.epochs;
    std::vector<int> movable;
    for (VehicleState& v : vehicles_) {
      if (v.mode == VehicleMode::kTwoOnBoard) continue;
      if (v.mode == VehicleMode::kEmptyRoaming && v.trips.empty()) {
        auto [spot, deadline] =
            select_hot_spot(graph_, demand_, v.region, t, config_.hot_spot_lookahead,
                            config_.hot_spot_deadline_factor);
        if (spot < 0) {
          // Nothing reachable: park for one slot, then look again.
          v.trips.push_back({TripSpec{v.region, v.region, 1}, t, true});
          v.plan.assign(1, Waypoint{v.region, t + 1});
          continue;
        }
        v.trips.push_back({TripSpec{v.region, spot, deadline}, t, true});
      }
      movable.push_back(v.id);
    }
    if (movable.empty()) return;

    if (scheme_ == Scheme::kFastest) {
      for (int i : movable) {
        VehicleState& v = vehicles_[i];
        auto [from, layer] = anchor(v, t);
        v.plan.clear();
        if (layer > 0) v.plan.push_back({from, t + layer});
        if (from != v.trips.front().trip.destination) {
          append_fastest(v, from, t + layer, v.trips.front().trip.destination);
        }
      }
      return;
    }
    if (scheme_ == Scheme::kJoint) {
      optimize(t, movable);
    } else {
      for (int i : movable) optimize(t, {i});
    }
  }

  void optimize(int t, const std::vector<int>& group) {
    std::vector<DispatchVehicle> fleet;
    for (int i : group) {
      const VehicleState& v = vehicles_[i];
      const OnBoardTrip& lead = v.trips.front();
      auto [from, layer] = anchor(v, t);
      const int budget = lead.trip.deadline - lead.elapsed(t);
      fleet.push_back({{from, layer, lead.trip.destination, budget}, lead.trip,
                       lead.elapsed(t)});
    }
    const DispatchProblem problem =
        build_problem(graph_, demand_, config_.alpha, fleet, t, config_.allow_waiting);
    const SolveReport report = solve(problem, config_.solver);
    if (report.status == SolveStatus::kNotConverged) metrics_.converged = false;
    const JointSolution routed = map_mpan_to_mpa(problem, report.solution);
    const TimeExpandedGraph& g = problem.graph();
    for (std::size_t j = 0; j < group.size(); ++j) {
      const int id = group[j];
      VehicleState& v = vehicles_[id];
      v.plan.clear();
      const auto& route = routed.routes[j];
      const std::size_t first = g.layer_of(route.front()) > 0 ? 0 : 1;
      for (std::size_t s = first; s + 1 < route.size(); ++s) {
        v.plan.push_back({g.region_of(route[s]), t + g.layer_of(route[s])});
      }
      y_[id].clear();
      for (int c = 0; c < problem.num_cells(); ++c) {
        const double y = routed.y[j][c];
        if (y <= 0.0) continue;
        const DemandCell& cell = problem.cell(c);
        y_[id][{id, t + cell.layer, cell.origin, cell.destination, cell.count}] = y;
      }
    }
  }

  const RegionGraph& graph_;
  const DemandModel& demand_;
  Scheme scheme_;
  std::uint64_t seed_;
  SimConfig config_;
  Rng assign_rng_;
  int start_ = 0;
  int end_ = 0;
  std::vector<VehicleState> vehicles_;
  std::vector<AssignmentVector> y_;
  std::vector<std::vector<int>> open_record_;
  EpisodeMetrics metrics_;
};

}  // namespace detail

inline EpisodeMetrics run_episode(const RegionGraph& graph, const DemandModel& demand,
                                  const Instance& instance, Scheme scheme,
                                  std::uint64_t seed, const SimConfig& config = {},
                                  int instance_id = 0) {
  detail::Episode episode(graph, demand, instance, scheme, seed, config);
  EpisodeMetrics m = episode.run();
  m.instance_id = instance_id;
  return m;
}

// Instances whose fastest source-destination path has more than
// `min_edges` hops, drawn with a seeded generator.
inline std::vector<Instance> generate_instances(const RegionGraph& graph, int fleet_size,
                                                int count, int start_slot,
                                                std::uint64_t seed, int min_edges = 3) {
  std::vector<std::pair<RegionId, RegionId>> pairs;
  for (RegionId s = 0; s < graph.num_regions(); ++s) {
    for (RegionId d = 0; d < graph.num_regions(); ++d) {
      if (s == d || !graph.reachable(s, d)) continue;
      if (static_cast<int>(graph.fastest_path(s, d).size()) - 1 > min_edges) {
        pairs.emplace_back(s, d);
      }
    }
  }
  if (pairs.empty()) fail_invalid("no region pair has a path longer than ", min_edges, " hops");
  Rng rng(seed);
  std::vector<Instance> out;
  for (int c = 0; c < count; ++c) {
    Instance inst;
    inst.start_slot = start_slot;
    for (int i = 0; i < fleet_size; ++i) {
      const auto [s, d] = pairs[rng.below(pairs.size())];
      inst.sources.push_back(s);
      inst.destinations.push_back(d);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace rideshare
