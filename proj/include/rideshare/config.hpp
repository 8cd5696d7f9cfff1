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

// Run configuration loaded from a single JSON file. Unknown keys are
// errors so that typos never silently fall back to defaults.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "rideshare/common.hpp"
#include "rideshare/sim.hpp"
#include "rideshare/solver.hpp"

namespace rideshare {

struct RunConfig {
  // Inputs. Relative paths are resolved against the config file directory.
  std::string nodes_path;
  std::string edges_path;
  std::string trips_path;
  int num_days = 1;
  std::string scenario = "data";  // "data" or "demand_rich"
  std::string output_dir = "out";

  // Region graph and demand.
  double cell_width_km = 1.0;
  double cell_height_km = 1.0;
  int slot_minutes = 5;
  double speed_kmh = 15.0;
  double eta_detour = 0.8;
  double alpha = 1.3;
  int max_count = 2;
  int horizon_slots = 288;

  // Fleet and experiment protocol.
  std::vector<int> fleet_sizes{4};
  int instances = 1;
  std::string instance_source;  // "scenario" or "random"; empty picks by scenario
  std::vector<int> start_slots{2};
  std::vector<Scheme> schemes{Scheme::kJoint, Scheme::kIndependent, Scheme::kFastest};
  int seeds = 10;
  std::uint64_t seed = 1;

  SolverConfig solver;
  int hot_spot_lookahead = 6;
  double hot_spot_deadline_factor = 2.0;
  int episode_slots = 0;
  bool allow_waiting = false;

  // Single solve: either a named fixture or vehicles on the scenario graph.
  std::string solve_fixture;
  int solve_slot = 0;
  std::vector<RegionId> solve_sources;
  std::vector<RegionId> solve_destinations;

  // Oracle cross-check.
  int oracle_instances = 30;
  double grid_resolution = 0.05;

  SimConfig sim_config() const {
    SimConfig c;
    c.alpha = alpha;
    c.solver = solver;
    c.solver.record_trace = false;
    c.hot_spot_lookahead = hot_spot_lookahead;
    c.hot_spot_deadline_factor = hot_spot_deadline_factor;
    c.episode_slots = episode_slots;
    c.allow_waiting = allow_waiting;
    return c;
  }

  std::string resolved_instance_source() const {
    if (!instance_source.empty()) return instance_source;
    return scenario == "demand_rich" ? "scenario" : "random";
  }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) fail_invalid("config: ", what);
    };
    require(scenario == "data" || scenario == "demand_rich",
            "scenario must be \"data\" or \"demand_rich\"");
    require(num_days >= 1, "num_days must be >= 1");
    require(cell_width_km > 0 && cell_height_km > 0, "grid cell dimensions must be > 0");
    require(slot_minutes >= 1, "slot_minutes must be >= 1");
    require(speed_kmh > 0, "speed_kmh must be > 0");
    require(eta_detour > 0 && eta_detour <= 1, "eta_detour must lie in (0, 1]");
    require(alpha >= 1, "alpha must be >= 1");
    require(max_count >= 1, "max_count must be >= 1");
    require(horizon_slots >= 1, "horizon_slots must be >= 1");
    require(!fleet_sizes.empty(), "fleet_sizes must not be empty");
    for (int n : fleet_sizes) require(n >= 1, "fleet sizes must be >= 1");
    require(instances >= 1, "instances must be >= 1");
    const std::string source = resolved_instance_source();
    require(source == "scenario" || source == "random",
            "instance_source must be \"scenario\" or \"random\"");
    require(!start_slots.empty(), "start_slots must not be empty");
    for (int s : start_slots) require(s >= 0, "start slots must be >= 0");
    require(!schemes.empty(), "schemes must not be empty");
    require(seeds >= 1, "seeds must be >= 1");
    require(solver.gap_threshold >= 0, "solver.gap_threshold must be >= 0");
    require(solver.max_iterations >= 1, "solver.max_iterations must be >= 1");
    require(solver.initial_step >= 0, "solver.initial_step must be >= 0");
    require(hot_spot_lookahead >= 1, "sim.hot_spot_lookahead must be >= 1");
    require(hot_spot_deadline_factor >= 1, "sim.hot_spot_deadline_factor must be >= 1");
    require(episode_slots >= 0, "sim.episode_slots must be >= 0");
    require(solve_sources.size() == solve_destinations.size(),
            "solve.sources and solve.destinations differ in length");
    require(oracle_instances >= 1, "oracle.instances must be >= 1");
    require(grid_resolution > 0 && grid_resolution <= 0.5,
            "oracle.grid_resolution must lie in (0, 0.5]");
  }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!j.is_object()) fail_invalid("config: ", where.empty() ? "root" : where, " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      fail_invalid("config: unknown key '", where.empty() ? "" : where + ".", key, "'");
    }
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail_invalid("config: bad value for '", key, "': ", e.what());
  }
}

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j,
                              const std::filesystem::path& base_dir = ".") {
  using detail::read;
  detail::reject_unknown(j,
                         {"network", "trips", "num_days", "scenario", "output_dir", "grid",
                          "slot_minutes", "speed_kmh", "eta_detour", "alpha", "max_count",
                          "horizon_slots", "fleet_sizes", "instances", "instance_source",
                          "start_slots", "schemes", "seeds", "seed", "solver", "sim", "solve",
                          "oracle"},
                         "");
  RunConfig c;
  if (j.contains("network")) {
    const auto& n = j.at("network");
    detail::reject_unknown(n, {"nodes", "edges"}, "network");
    read(n, "nodes", c.nodes_path);
    read(n, "edges", c.edges_path);
  }
  read(j, "trips", c.trips_path);
  read(j, "num_days", c.num_days);
  read(j, "scenario", c.scenario);
  read(j, "output_dir", c.output_dir);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::reject_unknown(g, {"width_km", "height_km"}, "grid");
    read(g, "width_km", c.cell_width_km);
    read(g, "height_km", c.cell_height_km);
  }
  read(j, "slot_minutes", c.slot_minutes);
  read(j, "speed_kmh", c.speed_kmh);
  read(j, "eta_detour", c.eta_detour);
  read(j, "alpha", c.alpha);
  read(j, "max_count", c.max_count);
  read(j, "horizon_slots", c.horizon_slots);
  read(j, "fleet_sizes", c.fleet_sizes);
  read(j, "instances", c.instances);
  read(j, "instance_source", c.instance_source);
  read(j, "start_slots", c.start_slots);
  if (j.contains("schemes")) {
    std::vector<std::string> names;
    read(j, "schemes", names);
    c.schemes.clear();
    for (const auto& name : names) c.schemes.push_back(parse_scheme(name));
  }
  read(j, "seeds", c.seeds);
  read(j, "seed", c.seed);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    detail::reject_unknown(s, {"gap_threshold", "max_iterations", "initial_step"}, "solver");
    read(s, "gap_threshold", c.solver.gap_threshold);
    read(s, "max_iterations", c.solver.max_iterations);
    read(s, "initial_step", c.solver.initial_step);
  }
  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    detail::reject_unknown(s,
                           {"hot_spot_lookahead", "hot_spot_deadline_factor", "episode_slots",
                            "allow_waiting"},
                           "sim");
    read(s, "hot_spot_lookahead", c.hot_spot_lookahead);
    read(s, "hot_spot_deadline_factor", c.hot_spot_deadline_factor);
    read(s, "episode_slots", c.episode_slots);
    read(s, "allow_waiting", c.allow_waiting);
  }
  if (j.contains("solve")) {
    const auto& s = j.at("solve");
    detail::reject_unknown(s, {"fixture", "slot", "sources", "destinations"}, "solve");
    read(s, "fixture", c.solve_fixture);
    read(s, "slot", c.solve_slot);
    read(s, "sources", c.solve_sources);
    read(s, "destinations", c.solve_destinations);
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    detail::reject_unknown(o, {"instances", "grid_resolution"}, "oracle");
    read(o, "instances", c.oracle_instances);
    read(o, "grid_resolution", c.grid_resolution);
  }
  c.nodes_path = detail::resolve(base_dir, c.nodes_path);
  c.edges_path = detail::resolve(base_dir, c.edges_path);
  c.trips_path = detail::resolve(base_dir, c.trips_path);
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_invalid("cannot open config ", path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail_invalid("config ", path, ": ", e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path());
}

// Worker threads for seed sweeps: RIDESHARE_THREADS, else the hardware.
inline int thread_count() {
  if (const char* env = std::getenv("RIDESHARE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace rideshare
