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

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <unistd.h>

#include "rideshare/oracle.hpp"
#include "rideshare/problem.hpp"

namespace rideshare::test_support {

// Fresh scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("rideshare_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream out(file(name), std::ios::binary);
    out << text;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

// Half-width of a 3-sigma binomial band around p for n trials.
inline double three_sigma(double p, int n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

// One random route per vehicle, drawn from the full route list.
inline std::vector<std::vector<int>> random_routes(const DispatchProblem& problem, Rng& rng) {
  std::vector<std::vector<int>> routes;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    const auto all = enumerate_routes(problem, i);
    routes.push_back(all[rng.below(all.size())]);
  }
  return routes;
}

// Random route-form solution inside the assignment polytope: y only on
// route cells with z = 1, y <= p, and fleet totals scaled under k p.
inline JointSolution random_route_form(const DispatchProblem& problem, Rng& rng) {
  JointSolution sol;
  sol.routes = random_routes(problem, rng);
  const int n = problem.num_vehicles();
  const int m = problem.num_cells();
  sol.y.assign(n, std::vector<double>(m, 0.0));
  for (int i = 0; i < n; ++i) {
    const auto mask = route_mask(problem, sol.routes[i]);
    for (int c = 0; c < m; ++c) {
      if (mask[problem.cell(c).node] && problem.z(i, c) && rng.uniform() < 0.8) {
        sol.y[i][c] = rng.uniform() * problem.cell(c).p;
      }
    }
  }
  for (int c = 0; c < m; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += sol.y[i][c];
    const double cap = problem.cell(c).capacity();
    if (total > cap) {
      for (int i = 0; i < n; ++i) sol.y[i][c] *= cap / total;
    }
  }
  // Per (vehicle, node, destination) masses must stay within [0, 1].
  for (int i = 0; i < n; ++i) {
    std::map<std::pair<int, RegionId>, double> mass;
    for (int c = 0; c < m; ++c) mass[{problem.cell(c).node, problem.cell(c).destination}] += sol.y[i][c];
    for (int c = 0; c < m; ++c) {
      const double total = mass[{problem.cell(c).node, problem.cell(c).destination}];
      if (total > 1.0) sol.y[i][c] /= total;
    }
  }
  return sol;
}

// D1 optimum by vertex enumeration: every choice of |vars| tight
// constraints is solved by Gaussian elimination and the best feasible
// vertex is kept. Only meant for a handful of variables.
inline double d1_vertex_oracle(const DispatchProblem& problem,
                               const std::vector<std::vector<double>>& lambda) {
  std::vector<std::pair<int, int>> vars;
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    for (int c = 0; c < problem.num_cells(); ++c) {
      if (problem.z(i, c)) vars.emplace_back(i, c);
    }
  }
  const int n = static_cast<int>(vars.size());
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int v = 0; v < n; ++v) {
    std::vector<double> row(n, 0.0);
    row[v] = -1.0;
    a.push_back(row);
    b.push_back(0.0);
  }
  for (int i = 0; i < problem.num_vehicles(); ++i) {
    std::vector<double> row(n, 0.0);
    for (int v = 0; v < n; ++v) row[v] = vars[v].first == i ? 1.0 : 0.0;
    a.push_back(row);
    b.push_back(1.0);
  }
  for (int c = 0; c < problem.num_cells(); ++c) {
    std::vector<double> row(n, 0.0);
    for (int v = 0; v < n; ++v) row[v] = vars[v].second == c ? 1.0 : 0.0;
    a.push_back(row);
    b.push_back(problem.cell(c).capacity());
  }
  const int m = static_cast<int>(a.size());
  double best = -1.0;
  std::vector<int> pick;
  auto evaluate = [&]() {
    std::vector<std::vector<double>> mat(n, std::vector<double>(n + 1));
    for (int r = 0; r < n; ++r) {
      for (int v = 0; v < n; ++v) mat[r][v] = a[pick[r]][v];
      mat[r][n] = b[pick[r]];
    }
    for (int col = 0; col < n; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(mat[r][col]) > std::abs(mat[piv][col])) piv = r;
      }
      if (std::abs(mat[piv][col]) < 1e-12) return;
      std::swap(mat[piv], mat[col]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = mat[r][col] / mat[col][col];
        for (int k = col; k <= n; ++k) mat[r][k] -= f * mat[col][k];
      }
    }
    std::vector<double> x(n);
    for (int v = 0; v < n; ++v) x[v] = mat[v][n] / mat[v][v];
    for (int r = 0; r < m; ++r) {
      double lhs = 0.0;
      for (int v = 0; v < n; ++v) lhs += a[r][v] * x[v];
      if (lhs > b[r] + 1e-9) return;
    }
    double value = 0.0;
    for (int v = 0; v < n; ++v) value += (1.0 - lambda[vars[v].first][vars[v].second]) * x[v];
    best = std::max(best, value);
  };
  std::function<void(int)> choose = [&](int from) {
    if (static_cast<int>(pick.size()) == n) {
      evaluate();
      return;
    }
    for (int r = from; r < m; ++r) {
      pick.push_back(r);
      choose(r + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return best;
}

// Two vehicles and three demand cells on a short two-lane corridor; cell
// probabilities, counts and z are random.
inline DispatchProblem two_by_three_problem(std::uint64_t seed) {
  Rng rng(seed);
  const RegionGraph graph = RegionGraph::from_edges(
      4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}, {1, 2, 1}});
  const std::vector<VehicleRoute> routes{{0, 0, 3, 3}, {0, 0, 3, 2}};
  TimeExpandedGraph g = TimeExpandedGraph::build(graph, routes);
  std::vector<DemandCell> cells;
  const std::vector<std::pair<RegionId, int>> spots{{1, 1}, {2, 1}, {2, 2}};
  for (const auto& [v, layer] : spots) {
    const int k = 1 + static_cast<int>(rng.below(2));
    cells.push_back({g.node(v, layer), layer, v, 3, k, 0.05 + 0.9 * rng.uniform()});
  }
  std::vector<std::vector<std::uint8_t>> z(2, std::vector<std::uint8_t>(3, 0));
  for (auto& row : z) {
    for (auto& x : row) x = rng.uniform() < 0.75 ? 1 : 0;
  }
  return DispatchProblem(std::move(g), std::move(cells), std::move(z));
}

}  // namespace rideshare::test_support
