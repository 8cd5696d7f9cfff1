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

#include <vector>

#include "rideshare/fixtures.hpp"
#include "rideshare/sim.hpp"
#include "test_support.hpp"

namespace rideshare {
namespace {

using test_support::three_sigma;

constexpr Scheme kAllSchemes[] = {Scheme::kJoint, Scheme::kIndependent, Scheme::kFastest};

// Bidirectional line 0 - 1 - 2 - 3 with unit edges.
RegionGraph line4() {
  std::vector<RegionEdge> edges;
  for (int v = 0; v < 3; ++v) {
    edges.push_back({v, v + 1, 1});
    edges.push_back({v + 1, v, 1});
  }
  return RegionGraph::from_edges(4, edges);
}

// The log opens with one record per initial passenger.
void expect_consistent_log(const EpisodeMetrics& m, int fleet) {
  EXPECT_EQ(static_cast<int>(m.service_log.size()), m.pickups + fleet);
  int per_slot = 0;
  for (int c : m.pickups_per_slot) per_slot += c;
  EXPECT_EQ(per_slot, m.pickups);
  for (const ServiceRecord& r : m.service_log) {
    if (r.delivery_slot >= 0) {
      EXPECT_LE(r.delivery_slot - r.pickup_slot, r.deadline);
    }
  }
}

TEST(Scheme, ParseRoundTrip) {
  for (Scheme s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_THROW(parse_scheme("greedy"), InvalidInput);
}

TEST(RunEpisode, ZeroDemandMeansNoPickups) {
  const RegionGraph g = line4();
  const DemandModel demand(20, 4, 1);
  const Instance inst{{0, 3}, {3, 0}, 2};
  for (Scheme s : kAllSchemes) {
    const EpisodeMetrics m = run_episode(g, demand, inst, s, 1);
    EXPECT_EQ(m.pickups, 0) << to_string(s);
    EXPECT_EQ(m.service_log.size(), 2u);
    EXPECT_GE(m.epochs, 1);
  }
}

TEST(RunEpisode, GuaranteedRequestIsPickedByEveryScheme) {
  const RegionGraph g = line4();
  DemandModel demand(20, 4, 1);
  demand.set(3, 1, 2, {1.0});
  const Instance inst{{0}, {3}, 2};
  for (Scheme s : kAllSchemes) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const EpisodeMetrics m = run_episode(g, demand, inst, s, seed);
      ASSERT_EQ(m.pickups, 1) << to_string(s);
      const ServiceRecord& r = m.service_log.back();
      EXPECT_EQ(r.origin, 1);
      EXPECT_EQ(r.destination, 2);
      EXPECT_EQ(r.pickup_slot, 3);
      EXPECT_EQ(r.delivery_slot, 4);
      expect_consistent_log(m, 1);
    }
  }
}

// 2 x 2 grid: 0 1 / 2 3. The fastest path 0 -> 3 goes through region 1
// (smallest id on ties); demand sits only in region 2.
TEST(RunEpisode, DemandAwareRoutingDetoursWhereFastestDoesNot) {
  const RegionGraph g = fixtures::grid_graph(2, 2);
  EXPECT_EQ(g.fastest_path(0, 3), (std::vector<RegionId>{0, 1, 3}));
  DemandModel demand(20, 4, 1);
  demand.set(3, 2, 3, {1.0});
  const Instance inst{{0}, {3}, 2};
  EXPECT_EQ(run_episode(g, demand, inst, Scheme::kFastest, 1).pickups, 0);
  EXPECT_EQ(run_episode(g, demand, inst, Scheme::kJoint, 1).pickups, 1);
  EXPECT_EQ(run_episode(g, demand, inst, Scheme::kIndependent, 1).pickups, 1);
}

TEST(RunEpisode, SingleVehicleJointEqualsIndependent) {
  const fixtures::Scenario sc = fixtures::demand_rich_scenario();
  SimConfig config;
  config.solver.max_iterations = 100;
  for (int v = 0; v < 4; ++v) {
    const Instance inst{{sc.instance.sources[v]}, {sc.instance.destinations[v]}, 2};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const EpisodeMetrics a = run_episode(sc.graph, sc.demand, inst, Scheme::kJoint, seed, config);
      const EpisodeMetrics b =
          run_episode(sc.graph, sc.demand, inst, Scheme::kIndependent, seed, config);
      EXPECT_EQ(a.pickups, b.pickups);
      EXPECT_EQ(a.epochs, b.epochs);
      EXPECT_EQ(a.pickups_per_slot, b.pickups_per_slot);
      ASSERT_EQ(a.service_log.size(), b.service_log.size());
      for (std::size_t j = 0; j < a.service_log.size(); ++j) {
        EXPECT_EQ(a.service_log[j].pickup_slot, b.service_log[j].pickup_slot);
        EXPECT_EQ(a.service_log[j].destination, b.service_log[j].destination);
      }
    }
  }
}

TEST(RunEpisode, ConflictResolvedUniformly) {
  const RegionGraph g = line4();
  DemandModel demand(20, 4, 1);
  demand.set(3, 1, 2, {1.0});
  const Instance inst{{0, 0}, {3, 3}, 2};
  constexpr int kSeeds = 10000;
  int first = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const EpisodeMetrics m = run_episode(g, demand, inst, Scheme::kIndependent, seed);
    ASSERT_EQ(m.pickups, 1);
    first += m.service_log.back().vehicle == 0;
  }
  EXPECT_NEAR(first / double(kSeeds), 0.5, three_sigma(0.5, kSeeds));
}

TEST(RunEpisode, DeterministicGivenSeed) {
  const fixtures::Scenario sc = fixtures::demand_rich_scenario();
  SimConfig config;
  config.solver.max_iterations = 100;
  for (Scheme s : kAllSchemes) {
    const EpisodeMetrics a = run_episode(sc.graph, sc.demand, sc.instance, s, 42, config);
    const EpisodeMetrics b = run_episode(sc.graph, sc.demand, sc.instance, s, 42, config);
    EXPECT_EQ(a.pickups, b.pickups);
    EXPECT_EQ(a.epochs, b.epochs);
    EXPECT_EQ(a.pickups_per_slot, b.pickups_per_slot);
  }
}

TEST(RunEpisode, ServiceLogHonoursDeadlines) {
  const fixtures::Scenario sc = fixtures::demand_rich_scenario();
  SimConfig config;
  config.solver.max_iterations = 100;
  for (Scheme s : kAllSchemes) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const EpisodeMetrics m = run_episode(sc.graph, sc.demand, sc.instance, s, seed, config);
      expect_consistent_log(m, 4);
      // At most two real passengers per vehicle at any slot.
      for (int v = 0; v < 4; ++v) {
        for (int t = 0; t < sc.demand.horizon(); ++t) {
          int on_board = 0;
          for (const ServiceRecord& r : m.service_log) {
            const int end = r.delivery_slot < 0 ? 1 << 20 : r.delivery_slot;
            on_board += r.vehicle == v && r.pickup_slot <= t && t < end;
          }
          EXPECT_LE(on_board, 2) << "vehicle " << v << " slot " << t;
        }
      }
    }
  }
}

TEST(RunEpisode, IsolatedDestinationParksTheVehicle) {
  // Region 2 has no outgoing edges.
  const RegionGraph g = RegionGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {1, 0, 1}});
  DemandModel demand(20, 3, 1);
  demand.set(1, 0, 1, {0.5});
  const Instance inst{{0}, {2}, 0};
  for (Scheme s : kAllSchemes) {
    SimConfig config;
    config.episode_slots = 10;
    EXPECT_NO_THROW(run_episode(g, demand, inst, s, 3, config)) << to_string(s);
  }
}

TEST(SelectHotSpot, SingleHotRegion) {
  const RegionGraph g = line4();
  DemandModel demand(10, 4, 1);
  demand.set(2, 3, 0, {0.4});
  EXPECT_EQ(select_hot_spot(g, demand, 0, 0, 6, 2.0), (std::pair<RegionId, int>{3, 6}));
}

TEST(SelectHotSpot, UniformDemandPicksNearest) {
  const RegionGraph g = line4();
  DemandModel demand(10, 4, 1);
  for (int v = 0; v < 4; ++v) demand.set(1, v, (v + 1) % 4, {0.2});
  EXPECT_EQ(select_hot_spot(g, demand, 2, 0, 6, 2.0).first, 1);
  EXPECT_EQ(select_hot_spot(g, demand, 0, 0, 6, 2.0), (std::pair<RegionId, int>{1, 2}));
}

TEST(SelectHotSpot, ArgmaxOfExpectedMass) {
  // Three regions fully connected; masses 0.3, 1.0 (0.2 + 2 * 0.4), 0.9.
  const RegionGraph g = RegionGraph::from_edges(
      3, {{0, 1, 1}, {1, 0, 1}, {0, 2, 2}, {2, 0, 2}, {1, 2, 1}, {2, 1, 1}});
  DemandModel demand(10, 3, 2);
  demand.set(1, 0, 1, {0.3, 0.0});
  demand.set(2, 1, 0, {0.2, 0.4});
  demand.set(3, 2, 0, {0.9, 0.0});
  EXPECT_EQ(select_hot_spot(g, demand, 0, 0, 6, 2.0).first, 1);
  // Outside the lookahead window the demand of region 1 is invisible.
  EXPECT_EQ(select_hot_spot(g, demand, 0, 2, 6, 2.0).first, 2);
}

TEST(GenerateInstances, LongTripsOnly) {
  const RegionGraph g = fixtures::grid_graph(4, 3);
  const auto instances = generate_instances(g, 3, 5, 7, 99);
  ASSERT_EQ(instances.size(), 5u);
  for (const Instance& inst : instances) {
    EXPECT_EQ(inst.start_slot, 7);
    ASSERT_EQ(inst.sources.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_GT(g.fastest_path(inst.sources[i], inst.destinations[i]).size() - 1, 3u);
    }
  }
  EXPECT_THROW(generate_instances(line4(), 1, 1, 0, 1), InvalidInput);
}

}  // namespace
}  // namespace rideshare
