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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rideshare/cli.hpp"
#include "rideshare/rideshare.hpp"
#include "test_support.hpp"

namespace rideshare {
namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;
int g_weak_duality_checks = 0;
int g_weak_duality_violations = 0;

void report(const char* id, bool pass, double seconds, const std::string& detail) {
  std::printf("%s %s (%.2f s) %s\n", id, pass ? "PASS" : "FAIL", seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void run(const char* id, double limit_seconds, Fn fn) {
  const auto t0 = Clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (seconds > limit_seconds) {
    detail += " [over the " + format_double(limit_seconds) + " s limit]";
    pass = false;
  }
  report(id, pass, seconds, detail);
}

SolveReport tracked_solve(const DispatchProblem& problem, SolverConfig config) {
  config.record_trace = true;
  const SolveReport r = solve(problem, config);
  for (const IterationRecord& rec : r.trace) {
    ++g_weak_duality_checks;
    if (rec.dual < rec.primal - 1e-9) ++g_weak_duality_violations;
  }
  g_weak_duality_violations += r.weak_duality_violations;
  return r;
}

bool ac1(std::string& detail) {
  const DispatchProblem problem = fixtures::integrality_gap_problem();
  const double integral = oracle_mpan(problem).value;
  const double relaxed = lp_relaxation_mpan(problem).value;
  SolverConfig config;
  const SolveReport r = tracked_solve(problem, config);
  detail = "oracle " + format_double(integral) + ", relaxed " + format_double(relaxed) +
           ", solver primal " + format_double(r.primal) + " dual " + format_double(r.dual);
  return std::abs(integral - 1.3) <= 1e-6 && std::abs(relaxed - 1.37) <= 1e-6;
}

bool ac2(std::string& detail) {
  Rng rng(2026);
  int cases = 0;
  int violations = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; cases < 1000; ++s) {
    const DispatchProblem problem = fixtures::random_problem(mix_seed(77, s));
    const JointSolution sol = test_support::random_route_form(problem, rng);
    for (int i = 0; i < problem.num_vehicles() && cases < 1000; ++i, ++cases) {
      const RoutedAssignment ra = routed_assignment(problem, sol, i);
      const double f = objective_f(ra);
      const double g = objective_g(ra);
      const double slack = std::min(f - kOneMinusInvE * g, g - f);
      worst = std::min(worst, slack);
      if (slack < -1e-12) ++violations;
    }
  }
  detail = format_double(cases) + " cases, " + std::to_string(violations) +
           " violations, worst slack " + format_double(worst);
  return violations == 0;
}

struct OracleScaleRun {
  int instances = 0;
  int sandwich_failures = 0;
  int certified = 0;
  int certified_mismatch = 0;
  int exceeded = 0;
  double max_grid_error = 0.0;
  std::string per_instance_errors;
};

const OracleScaleRun& oracle_scale_run() {
  static const OracleScaleRun run = [] {
    OracleScaleRun out;
    OracleBudget budget;
    SolverConfig config;
    for (std::uint64_t attempt = 0; out.instances < 30 && attempt < 3000; ++attempt) {
      const DispatchProblem problem = fixtures::random_problem(mix_seed(4242, attempt));
      OracleResult mpan, mpt;
      try {
        mpan = oracle_mpan(problem, budget);
        mpt = oracle_mpt(problem, budget);
      } catch (const OracleRefusal&) {
        continue;
      }
      ++out.instances;
      const double f_at = total_f(problem, map_mpan_to_mpa(problem, mpan.solution));
      if (f_at < kOneMinusInvE * mpt.value - mpt.error_bound - kObjectiveTol) {
        ++out.sandwich_failures;
      }
      out.max_grid_error = std::max(out.max_grid_error, mpt.error_bound);
      out.per_instance_errors += (out.instances > 1 ? " " : "") + format_double(mpt.error_bound);
      const SolveReport r = tracked_solve(problem, config);
      if (r.certificate.holds) {
        ++out.certified;
        if (std::abs(r.primal - mpan.value) > 1e-6) ++out.certified_mismatch;
      } else if (r.primal > mpan.value + 1e-6) {
        ++out.exceeded;
      }
    }
    return out;
  }();
  return run;
}

bool ac3(std::string& detail) {
  const OracleScaleRun& r = oracle_scale_run();
  detail = std::to_string(r.instances) + " instances, " + std::to_string(r.sandwich_failures) +
           " failures, grid errors [" + r.per_instance_errors + "]";
  return r.instances >= 30 && r.sandwich_failures == 0;
}

bool ac4(std::string& detail) {
  const OracleScaleRun& r = oracle_scale_run();
  detail = std::to_string(r.certified) + " certified (" + std::to_string(r.certified_mismatch) +
           " mismatches), " + std::to_string(r.instances - r.certified) + " uncertified (" +
           std::to_string(r.exceeded) + " above the oracle)";
  return r.instances >= 30 && r.certified_mismatch == 0 && r.exceeded == 0;
}

bool ac6(std::string& detail) {
  Rng rng(606);
  int d1_bad = 0;
  double d1_worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const DispatchProblem problem = test_support::two_by_three_problem(mix_seed(606, trial));
    Multipliers lambda(problem.num_vehicles(), std::vector<double>(problem.num_cells(), 0.0));
    for (auto& row : lambda) {
      for (double& l : row) l = rng.uniform() < 0.3 ? 0.0 : 1.3 * rng.uniform();
    }
    const double err = std::abs(solve_d1(problem, lambda).value -
                                test_support::d1_vertex_oracle(problem, lambda));
    d1_worst = std::max(d1_worst, err);
    if (err > 1e-6) ++d1_bad;
  }
  int d2_bad = 0;
  int d2_cases = 0;
  for (int trial = 0; d2_cases < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(9));
    std::vector<std::vector<int>> succ(n);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng.uniform() < 0.4) succ[u].push_back(v);
      }
    }
    std::vector<double> w(n);
    for (double& x : w) x = static_cast<double>(rng.below(8)) / 8.0;
    auto fn = [&](int u) { return succ[u]; };
    const PathResult ref = oracle_d2(n, fn, w, 0, n - 1);
    if (ref.path.empty()) continue;
    ++d2_cases;
    const PathResult dp = longest_path(n, fn, w, 0, n - 1);
    if (dp.value != ref.value) ++d2_bad;
  }
  detail = "D1 50 cases, " + std::to_string(d1_bad) + " mismatches (worst " +
           format_double(d1_worst) + "); D2 " + std::to_string(d2_cases) + " DAGs, " +
           std::to_string(d2_bad) + " mismatches";
  return d1_bad == 0 && d2_bad == 0;
}

bool ac7(std::string& detail) {
  Rng rng(707);
  constexpr int kDraws = 100000;
  int over_k = 0;
  int outside = 0;
  double worst_z = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const int k = 1 + static_cast<int>(rng.below(3));
    std::vector<double> q(n);
    double total = 0.0;
    for (double& v : q) total += (v = rng.uniform());
    if (total > k) {
      for (double& v : q) v *= k / total;
    }
    const WheelLayout wheel = build_wheel_from_q(q);
    std::vector<int> hits(n, 0);
    for (int d = 0; d < kDraws; ++d) {
      const std::vector<int> chosen = draw(wheel, rng);
      if (static_cast<int>(chosen.size()) > k) ++over_k;
      for (int i : chosen) ++hits[i];
    }
    for (int i = 0; i < n; ++i) {
      const double freq = hits[i] / double(kDraws);
      const double band = std::max(test_support::three_sigma(wheel.q[i], kDraws), 1e-12);
      if (std::abs(freq - wheel.q[i]) > band) ++outside;
      worst_z = std::max(worst_z, 3.0 * std::abs(freq - wheel.q[i]) / band);
    }
  }
  detail = "20 vectors x 1e5 draws, " + std::to_string(over_k) + " draws above k, " +
           std::to_string(outside) + " frequencies outside 3 sigma, worst |z| " +
           format_double(std::round(worst_z * 100.0) / 100.0);
  return over_k == 0 && outside == 0;
}

bool ac8(std::string& detail) {
  const fixtures::Scenario sc = fixtures::demand_rich_scenario();
  SimConfig config;
  config.alpha = sc.alpha;
  config.solver.max_iterations = 200;
  config.solver.record_trace = false;
  constexpr int kSeeds = 100;
  const Scheme schemes[] = {Scheme::kJoint, Scheme::kIndependent, Scheme::kFastest};
  std::vector<std::vector<double>> pickups(3, std::vector<double>(kSeeds));
  parallel_for(3 * kSeeds, thread_count(), [&](int j) {
    const int s = j / kSeeds;
    const int seed = j % kSeeds;
    pickups[s][seed] =
        run_episode(sc.graph, sc.demand, sc.instance, schemes[s], seed, config).pickups;
  });
  double mean[3];
  for (int s = 0; s < 3; ++s) mean[s] = std::get<0>(mean_ci95(pickups[s]));
  std::vector<double> diff(kSeeds);
  for (int i = 0; i < kSeeds; ++i) diff[i] = pickups[0][i] - pickups[2][i];
  const auto [d_mean, d_lo, d_hi] = mean_ci95(diff);
  (void)d_hi;
  detail = "joint " + format_double(mean[0]) + ", independent " + format_double(mean[1]) +
           ", fastest " + format_double(mean[2]) + "; joint - fastest " +
           format_double(d_mean) + " with 95% interval low " + format_double(d_lo);
  return mean[0] >= mean[1] && mean[1] >= mean[2] && d_lo > 0.0;
}

bool ac9(std::string& detail) {
  test_support::TempDir dir("acceptance_det");
  std::ostringstream log;
  bool same = true;
  std::string differing;
  auto compare = [&](const std::string& a, const std::string& b,
                     std::initializer_list<const char*> files) {
    for (const char* f : files) {
      if (read_text(a + "/" + f) != read_text(b + "/" + f)) {
        same = false;
        differing += std::string(" ") + f;
      }
    }
  };
  RunConfig solve_cfg = load_config(std::string(RIDESHARE_DATA_DIR) + "/sample_config.json");
  for (const char* sub : {"solve_a", "solve_b"}) {
    solve_cfg.output_dir = dir.file(sub);
    cmd_solve(solve_cfg, log);
  }
  compare(dir.file("solve_a"), dir.file("solve_b"), {"report.json", "trace.csv"});

  RunConfig sim_cfg = parse_config(nlohmann::json{{"scenario", "demand_rich"},
                                                  {"seeds", 5},
                                                  {"solver", {{"max_iterations", 100}}}});
  for (const char* sub : {"sim_a", "sim_b"}) {
    sim_cfg.output_dir = dir.file(sub);
    cmd_simulate(sim_cfg, log);
  }
  compare(dir.file("sim_a"), dir.file("sim_b"),
          {"metrics.csv", "summary.csv", "instances.csv"});
  detail = same ? "solve and simulate outputs byte-identical" : "differing:" + differing;
  return same;
}

bool ac10(std::string& detail) {
  const int tt = travel_time_slots(1.0, 15.0, 1);
  const int dl = deadline_slots(10, 1.3);
  std::vector<TripRecord> records;
  for (int day = 0; day < 182; ++day) {
    if (day < 91) records.push_back({"d" + std::to_string(day), 0, 0, 1});
  }
  const DemandModel model = estimate_empirical(records, 182, 1, 1, 2);
  const double p = model.probability(0, 0, 1, 1);
  detail = "travel time " + std::to_string(tt) + ", deadline " + std::to_string(dl) +
           ", empirical p " + format_double(p);
  return tt == 4 && dl == 13 && std::abs(p - 0.5) <= 1e-12;
}

}  // namespace
}  // namespace rideshare

int main() {
  using namespace rideshare;
  run("AC1", 1.0, ac1);
  run("AC2", 5.0, ac2);
  run("AC3", 300.0, ac3);
  run("AC4", 300.0, ac4);
  run("AC6", 60.0, ac6);
  run("AC7", 120.0, ac7);
  run("AC8", 600.0, ac8);
  run("AC9", 120.0, ac9);
  run("AC10", 1.0, ac10);
  report("AC5", g_weak_duality_violations == 0, 0.0,
         std::to_string(g_weak_duality_checks) + " iterations checked, " +
             std::to_string(g_weak_duality_violations) + " violations");
  return g_failures == 0 ? 0 : 1;
}
