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

// JSON and CSV writers for build artifacts, solve reports and simulation
// metrics, plus SHA-256 content hashes for the build manifest.

#pragma once

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rideshare/common.hpp"
#include "rideshare/demand.hpp"
#include "rideshare/problem.hpp"
#include "rideshare/region_graph.hpp"
#include "rideshare/sim.hpp"
#include "rideshare/solver.hpp"

namespace rideshare {

using Json = nlohmann::ordered_json;

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

// Shortest decimal that round-trips, so output bytes depend only on values.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline Json to_json(const RegionGraph& graph) {
  Json regions = Json::array();
  for (const Region& r : graph.regions()) {
    regions.push_back({{"id", r.id},
                       {"cell_col", r.cell_col},
                       {"cell_row", r.cell_row},
                       {"representative", r.representative},
                       {"members", r.members}});
  }
  Json edges = Json::array();
  for (const RegionEdge& e : graph.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"delta", e.delta}});
  }
  return {{"num_regions", graph.num_regions()}, {"regions", regions}, {"edges", edges}};
}

inline Json to_json(const DemandModel& model) {
  Json cells = Json::array();
  for (const auto& [key, probs] : model.cells()) {
    cells.push_back({{"slot", key.slot},
                     {"origin", key.origin},
                     {"destination", key.destination},
                     {"p", probs}});
  }
  return {{"horizon", model.horizon()},
          {"num_regions", model.num_regions()},
          {"max_count", model.max_count()},
          {"cells", cells}};
}

inline DemandModel demand_from_json(const Json& j) {
  DemandModel model(j.at("horizon").get<int>(), j.at("num_regions").get<int>(),
                    j.at("max_count").get<int>());
  for (const auto& c : j.at("cells")) {
    model.set(c.at("slot").get<int>(), c.at("origin").get<RegionId>(),
              c.at("destination").get<RegionId>(), c.at("p").get<std::vector<double>>());
  }
  return model;
}

inline Json to_json(const GraphStats& s) {
  return {{"tau", s.tau},
          {"region_nodes", s.region_nodes},
          {"sinks", s.sinks},
          {"region_edges", s.region_edges},
          {"sink_edges", s.sink_edges}};
}

inline Json to_json(const DispatchProblem& problem, const SolveReport& report) {
  const TimeExpandedGraph& g = problem.graph();
  Json vehicles = Json::array();
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    Json route = Json::array();
    if (i < static_cast<int>(report.solution.routes.size())) {
      for (int n : report.solution.routes[i]) {
        if (g.is_sink(n)) continue;
        route.push_back({{"region", g.region_of(n)}, {"layer", g.layer_of(n)}});
      }
    }
    Json assignments = Json::array();
    for (int c = 0; c < problem.num_cells(); ++c) {
      const double y = report.solution.y.empty() ? 0.0 : report.solution.y[i][c];
      if (y <= 0.0) continue;
      const DemandCell& cell = problem.cell(c);
      assignments.push_back({{"layer", cell.layer},
                             {"origin", cell.origin},
                             {"destination", cell.destination},
                             {"count", cell.count},
                             {"y", y}});
    }
    vehicles.push_back({{"vehicle", i}, {"route", route}, {"assignments", assignments}});
  }
  Json witnesses = Json::array();
  for (const auto& w : report.certificate.witnesses) {
    witnesses.push_back({{"vehicle", w.vehicle},
                         {"cell", w.cell},
                         {"residual", w.residual},
                         {"lambda", w.lambda}});
  }
  return {{"status", to_string(report.status)},
          {"primal", report.primal},
          {"dual", report.dual},
          {"gap", report.gap},
          {"iterations", report.iterations},
          {"weak_duality_violations", report.weak_duality_violations},
          {"certificate", {{"holds", report.certificate.holds}, {"witnesses", witnesses}}},
          {"graph", to_json(g.stats())},
          {"vehicles", vehicles}};
}

inline std::string trace_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "iteration,dual,primal,gap,step\n";
  for (const IterationRecord& r : report.trace) {
    out << r.iteration << ',' << format_double(r.dual) << ',' << format_double(r.primal)
        << ',' << format_double(r.gap) << ',' << format_double(r.step) << '\n';
  }
  return out.str();
}

inline std::string metrics_csv(const std::vector<EpisodeMetrics>& runs) {
  std::ostringstream out;
  out << "scheme,seed,instance_id,pickups,epochs,converged\n";
  for (const EpisodeMetrics& m : runs) {
    out << to_string(m.scheme) << ',' << m.seed << ',' << m.instance_id << ',' << m.pickups
        << ',' << m.epochs << ',' << (m.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_invalid("cannot open ", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rideshare
