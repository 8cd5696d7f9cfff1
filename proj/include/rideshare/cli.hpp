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

// Subcommand implementations behind the command-line tool. Each command
// writes its outputs under the configured directory and returns the
// process exit code.

#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "rideshare/config.hpp"
#include "rideshare/demand.hpp"
#include "rideshare/fixtures.hpp"
#include "rideshare/objective.hpp"
#include "rideshare/oracle.hpp"
#include "rideshare/region_graph.hpp"
#include "rideshare/serialize.hpp"
#include "rideshare/sim.hpp"
#include "rideshare/solver.hpp"

namespace rideshare {

// Runs fn(0..count-1) on up to `threads` workers; fn must only touch its
// own output slot.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct World {
  RegionGraph graph;
  DemandModel demand;
  std::optional<Instance> scenario_instance;
};

inline World build_world(const RunConfig& config) {
  if (config.scenario == "demand_rich") {
    fixtures::Scenario sc = fixtures::demand_rich_scenario();
    return {std::move(sc.graph), std::move(sc.demand), std::move(sc.instance)};
  }
  if (config.nodes_path.empty() || config.edges_path.empty() || config.trips_path.empty()) {
    fail_invalid("config: network.nodes, network.edges and trips are required");
  }
  const RoadNetwork network = load_road_network(config.nodes_path, config.edges_path);
  auto regions = partition_grid(network, config.cell_width_km, config.cell_height_km);
  RegionGraph graph = build_region_graph(network, std::move(regions), config.eta_detour,
                                         config.speed_kmh, config.slot_minutes);
  const auto records = load_trip_records(config.trips_path);
  DemandModel demand = estimate_empirical(records, config.num_days, config.horizon_slots,
                                          config.max_count, graph.num_regions());
  return {std::move(graph), std::move(demand), std::nullopt};
}

inline std::filesystem::path prepare_output(const RunConfig& config) {
  const std::filesystem::path out(config.output_dir);
  std::filesystem::create_directories(out);
  return out;
}

inline int cmd_build(const RunConfig& config, std::ostream& log = std::cout) {
  const World world = build_world(config);
  const auto out = prepare_output(config);
  const std::string graph_text = to_json(world.graph).dump(2) + "\n";
  const std::string demand_text = to_json(world.demand).dump(2) + "\n";
  write_text((out / "region_graph.json").string(), graph_text);
  write_text((out / "demand.json").string(), demand_text);

  Json manifest;
  Json inputs = Json::array();
  for (const std::string& path : {config.nodes_path, config.edges_path, config.trips_path}) {
    if (path.empty()) continue;
    inputs.push_back({{"file", std::filesystem::path(path).filename().string()},
                      {"sha256", sha256_hex(read_text(path))}});
  }
  manifest["inputs"] = inputs;
  manifest["artifacts"] = Json::array({
      {{"file", "region_graph.json"},
       {"bytes", graph_text.size()},
       {"sha256", sha256_hex(graph_text)}},
      {{"file", "demand.json"},
       {"bytes", demand_text.size()},
       {"sha256", sha256_hex(demand_text)}},
  });
  manifest["regions"] = world.graph.num_regions();
  manifest["region_edges"] = world.graph.edges().size();
  manifest["demand_cells"] = world.demand.cells().size();
  write_text((out / "manifest.json").string(), manifest.dump(2) + "\n");
  log << "built " << world.graph.num_regions() << " regions, " << world.graph.edges().size()
      << " edges, " << world.demand.cells().size() << " demand cells -> " << out.string()
      << "\n";
  return 0;
}

inline DispatchProblem solve_problem(const RunConfig& config) {
  if (config.solve_fixture == "integrality_gap") return fixtures::integrality_gap_problem();
  if (!config.solve_fixture.empty()) {
    fail_invalid("config: unknown solve fixture '", config.solve_fixture, "'");
  }
  const World world = build_world(config);
  std::vector<RegionId> sources = config.solve_sources;
  std::vector<RegionId> destinations = config.solve_destinations;
  int slot = config.solve_slot;
  if (sources.empty()) {
    if (!world.scenario_instance) fail_invalid("config: solve.sources is required");
    sources = world.scenario_instance->sources;
    destinations = world.scenario_instance->destinations;
    slot = world.scenario_instance->start_slot;
  }
  std::vector<DispatchVehicle> fleet;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const TripSpec trip = make_trip(sources[i], destinations[i], config.alpha, world.graph);
    fleet.push_back({{sources[i], 0, destinations[i], trip.deadline}, trip, 0});
  }
  return build_problem(world.graph, world.demand, config.alpha, fleet, slot,
                       config.allow_waiting);
}

inline int cmd_solve(const RunConfig& config, std::ostream& log = std::cout) {
  const DispatchProblem problem = solve_problem(config);
  SolverConfig sc = config.solver;
  sc.record_trace = true;
  const SolveReport report = solve(problem, sc);
  const auto out = prepare_output(config);
  write_text((out / "report.json").string(), to_json(problem, report).dump(2) + "\n");
  write_text((out / "trace.csv").string(), trace_csv(report));
  log << "status " << to_string(report.status) << " primal " << format_double(report.primal)
      << " dual " << format_double(report.dual) << " iterations " << report.iterations << "\n";
  if (report.status == SolveStatus::kNotConverged) {
    std::cerr << "warning: iteration cap reached with gap " << format_double(report.gap)
              << "\n";
  }
  return 0;
}

struct SummaryRow {
  Scheme scheme;
  int fleet_size = 0;
  int start_hour = 0;
  int runs = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Mean and 95% normal-approximation interval.
inline std::tuple<double, double, double> mean_ci95(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, mean, mean};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  const double half = 1.959963984540054 * sd / std::sqrt(static_cast<double>(xs.size()));
  return {mean, mean - half, mean + half};
}

struct SimulationPlanEntry {
  int instance_id = 0;
  int fleet_size = 0;
  int start_slot = 0;
  Instance instance;
};

inline std::vector<SimulationPlanEntry> simulation_plan(const RunConfig& config,
                                                        const World& world) {
  std::vector<SimulationPlanEntry> plan;
  const bool from_scenario = config.resolved_instance_source() == "scenario";
  for (int n : config.fleet_sizes) {
    for (int start : config.start_slots) {
      std::vector<Instance> instances;
      if (from_scenario) {
        if (!world.scenario_instance) fail_invalid("config: scenario has no fixed instance");
        Instance inst = *world.scenario_instance;
        const std::size_t base = inst.sources.size();
        for (std::size_t i = base; i < static_cast<std::size_t>(n); ++i) {
          inst.sources.push_back(inst.sources[i % base]);
          inst.destinations.push_back(inst.destinations[i % base]);
        }
        inst.sources.resize(n);
        inst.destinations.resize(n);
        inst.start_slot = start;
        instances.assign(config.instances, inst);
      } else {
        instances = generate_instances(world.graph, n, config.instances, start,
                                       mix_seed(config.seed, 0x1257ull + n));
      }
      for (auto& inst : instances) {
        plan.push_back({static_cast<int>(plan.size()), n, start, std::move(inst)});
      }
    }
  }
  return plan;
}

inline int cmd_simulate(const RunConfig& config, std::ostream& log = std::cout) {
  const World world = build_world(config);
  const auto plan = simulation_plan(config, world);
  struct Job {
    int plan_index;
    Scheme scheme;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < plan.size(); ++p) {
    for (Scheme scheme : config.schemes) {
      for (int s = 0; s < config.seeds; ++s) {
        jobs.push_back({static_cast<int>(p), scheme, config.seed + static_cast<std::uint64_t>(s)});
      }
    }
  }
  const SimConfig sim = config.sim_config();
  std::vector<EpisodeMetrics> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), thread_count(), [&](int j) {
    const Job& job = jobs[j];
    const SimulationPlanEntry& entry = plan[job.plan_index];
    results[j] = run_episode(world.graph, world.demand, entry.instance, job.scheme, job.seed,
                             sim, entry.instance_id);
  });

  const auto out = prepare_output(config);
  write_text((out / "metrics.csv").string(), metrics_csv(results));

  std::ostringstream inst_csv;
  inst_csv << "instance_id,fleet_size,start_slot,start_hour,sources,destinations\n";
  for (const auto& e : plan) {
    auto join = [](const std::vector<RegionId>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
      return s;
    };
    inst_csv << e.instance_id << ',' << e.fleet_size << ',' << e.start_slot << ','
             << e.start_slot * config.slot_minutes / 60 << ',' << join(e.instance.sources)
             << ',' << join(e.instance.destinations) << '\n';
  }
  write_text((out / "instances.csv").string(), inst_csv.str());

  std::map<std::tuple<int, int, int>, std::vector<double>> groups;  // (scheme, N, hour)
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& e = plan[jobs[j].plan_index];
    groups[{static_cast<int>(jobs[j].scheme), e.fleet_size,
            e.start_slot * config.slot_minutes / 60}]
        .push_back(results[j].pickups);
  }
  std::ostringstream summary;
  summary << "scheme,fleet_size,start_hour,runs,mean_pickups,ci95_low,ci95_high\n";
  for (const auto& [key, xs] : groups) {
    const auto [mean, lo, hi] = mean_ci95(xs);
    summary << to_string(static_cast<Scheme>(std::get<0>(key))) << ',' << std::get<1>(key)
            << ',' << std::get<2>(key) << ',' << xs.size() << ',' << format_double(mean)
            << ',' << format_double(lo) << ',' << format_double(hi) << '\n';
    log << to_string(static_cast<Scheme>(std::get<0>(key))) << " N=" << std::get<1>(key)
        << " hour=" << std::get<2>(key) << " mean pickups " << format_double(mean) << "\n";
  }
  write_text((out / "summary.csv").string(), summary.str());
  return 0;
}

struct OracleCheckRow {
  int instance = 0;
  std::uint64_t seed = 0;
  double mpan = 0.0;
  double mpt = 0.0;
  double grid_error = 0.0;
  double f_at_mpan = 0.0;
  double solver_primal = 0.0;
  SolveStatus status = SolveStatus::kNotConverged;
  bool ok = true;
};

inline OracleCheckRow oracle_check_instance(const DispatchProblem& problem,
                                            const OracleBudget& budget,
                                            const SolverConfig& solver) {
  OracleCheckRow row;
  const OracleResult mpan = oracle_mpan(problem, budget);
  const OracleResult mpt = oracle_mpt(problem, budget);
  const SolveReport report = solve(problem, solver);
  row.mpan = mpan.value;
  row.mpt = mpt.value;
  row.grid_error = mpt.error_bound;
  row.f_at_mpan = total_f(problem, map_mpan_to_mpa(problem, mpan.solution));
  row.solver_primal = report.primal;
  row.status = report.status;
  row.ok = row.f_at_mpan >= kOneMinusInvE * row.mpt - row.grid_error - kObjectiveTol &&
           row.solver_primal <= row.mpan + 1e-6 && report.weak_duality_violations == 0 &&
           (report.status != SolveStatus::kCertified ||
            std::abs(row.solver_primal - row.mpan) <= 1e-6);
  return row;
}

inline int cmd_oracle_check(const RunConfig& config, std::ostream& log = std::cout) {
  OracleBudget budget;
  budget.grid_resolution = config.grid_resolution;
  std::vector<OracleCheckRow> rows;
  std::uint64_t seed = config.seed;
  int attempts = 0;
  while (static_cast<int>(rows.size()) < config.oracle_instances) {
    if (++attempts > 100 * config.oracle_instances) {
      fail_invalid("could not draw enough instances within the oracle budget");
    }
    const DispatchProblem problem = fixtures::random_problem(mix_seed(seed, attempts));
    try {
      OracleCheckRow row = oracle_check_instance(problem, budget, config.solver);
      row.instance = static_cast<int>(rows.size());
      row.seed = mix_seed(seed, attempts);
      rows.push_back(row);
    } catch (const OracleRefusal&) {
      continue;
    }
  }
  std::ostringstream csv;
  csv << "instance,seed,mpan,mpt,grid_error,f_at_mpan,solver_primal,status,ok\n";
  int failures = 0;
  for (const auto& r : rows) {
    failures += r.ok ? 0 : 1;
    csv << r.instance << ',' << r.seed << ',' << format_double(r.mpan) << ','
        << format_double(r.mpt) << ',' << format_double(r.grid_error) << ','
        << format_double(r.f_at_mpan) << ',' << format_double(r.solver_primal) << ','
        << to_string(r.status) << ',' << (r.ok ? 1 : 0) << '\n';
  }
  const auto out = prepare_output(config);
  write_text((out / "oracle_check.csv").string(), csv.str());
  log << rows.size() << " oracle instances, " << failures << " failures\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace rideshare
