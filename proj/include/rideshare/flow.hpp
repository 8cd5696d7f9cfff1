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

// Maximum-gain transportation flow with real capacities:
//
//   max  sum_a gain_a * f_a
//   s.t. sum_{a from i} f_a <= supply_i      (source side, e.g. vehicles)
//        sum_{a into c} f_a <= capacity_c    (sink side, e.g. demand cells)
//        0 <= f_a <= upper_a
//
// Solved by successive shortest augmenting paths on the residual network
// source -> i -> c -> sink with arc costs -gain. Only arcs with positive
// gain can carry flow in an optimum, so the rest are ignored. Shortest
// paths use label correcting, which tolerates the negative arc costs.

#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "rideshare/common.hpp"

namespace rideshare {

struct TransportArc {
  int source = 0;
  int sink = 0;
  double gain = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct TransportResult {
  std::vector<double> flow;  // per arc, same order as the input
  double value = 0.0;
  int augmentations = 0;
};

class TransportSolver {
 public:
  static constexpr double kEps = 1e-12;

  TransportSolver(std::vector<double> supply, std::vector<double> capacity)
      : supply_(std::move(supply)), capacity_(std::move(capacity)) {
    for (double s : supply_) {
      if (!(s >= 0.0)) fail_invalid("negative supply");
    }
    for (double c : capacity_) {
      if (!(c >= 0.0)) fail_invalid("negative capacity");
    }
  }

  int add_arc(int source, int sink, double gain,
              double upper = std::numeric_limits<double>::infinity()) {
    if (source < 0 || source >= static_cast<int>(supply_.size()) || sink < 0 ||
        sink >= static_cast<int>(capacity_.size())) {
      fail_invalid("transport arc endpoint out of range");
    }
    arcs_.push_back({source, sink, gain, upper});
    return static_cast<int>(arcs_.size()) - 1;
  }

  TransportResult solve() const {
    const int n_src = static_cast<int>(supply_.size());
    const int n_snk = static_cast<int>(capacity_.size());
    TransportResult result;
    result.flow.assign(arcs_.size(), 0.0);

    std::vector<int> live;  // arcs that may carry flow
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      if (arcs_[a].gain > kEps && arcs_[a].upper > kEps) live.push_back(static_cast<int>(a));
    }
    if (live.empty()) return result;

    std::vector<double> used(n_src, 0.0);
    std::vector<double> load(n_snk, 0.0);
    std::vector<double> d_src(n_src);
    std::vector<double> d_snk(n_snk);
    std::vector<int> pred_src(n_src);  // arc entering a source node backwards
    std::vector<int> pred_snk(n_snk);  // arc entering a sink node forwards
    const double inf = std::numeric_limits<double>::infinity();
    auto& flow = result.flow;

    const int max_augment = 8 * static_cast<int>(live.size() + n_src + n_snk) + 16;
    while (result.augmentations < max_augment) {
      for (int i = 0; i < n_src; ++i) {
        d_src[i] = supply_[i] - used[i] > kEps ? 0.0 : inf;
        pred_src[i] = -1;
      }
      std::fill(d_snk.begin(), d_snk.end(), inf);
      std::fill(pred_snk.begin(), pred_snk.end(), -1);
      bool changed = true;
      for (int round = 0; changed && round <= n_src + n_snk + 1; ++round) {
        changed = false;
        for (int a : live) {
          const TransportArc& arc = arcs_[a];
          if (d_src[arc.source] < inf && flow[a] < arc.upper - kEps) {
            const double nd = d_src[arc.source] - arc.gain;
            if (nd < d_snk[arc.sink] - kEps) {
              d_snk[arc.sink] = nd;
              pred_snk[arc.sink] = a;
              changed = true;
            }
          }
        }
        for (int a : live) {
          const TransportArc& arc = arcs_[a];
          if (d_snk[arc.sink] < inf && flow[a] > kEps) {
            const double nd = d_snk[arc.sink] + arc.gain;
            if (nd < d_src[arc.source] - kEps) {
              d_src[arc.source] = nd;
              pred_src[arc.source] = a;
              changed = true;
            }
          }
        }
      }
      int end = -1;
      for (int c = 0; c < n_snk; ++c) {
        if (capacity_[c] - load[c] <= kEps || d_snk[c] == inf) continue;
        if (end < 0 || d_snk[c] < d_snk[end]) end = c;
      }
      if (end < 0 || d_snk[end] >= -kEps) break;

      // Walk back to a source with spare supply, collecting the bottleneck.
      double push = capacity_[end] - load[end];
      std::vector<std::pair<int, bool>> path;  // (arc, forward?)
      int c = end;
      while (true) {
        const int a = pred_snk[c];
        path.emplace_back(a, true);
        push = std::min(push, arcs_[a].upper - flow[a]);
        const int i = arcs_[a].source;
        if (pred_src[i] < 0) {
          push = std::min(push, supply_[i] - used[i]);
          break;
        }
        const int b = pred_src[i];
        path.emplace_back(b, false);
        push = std::min(push, flow[b]);
        c = arcs_[b].sink;
        if (path.size() > 2 * (live.size() + 1)) {
          fail_invalid("transport solver: residual cycle while tracing path");
        }
      }
      if (push <= kEps) break;
      for (auto [a, forward] : path) flow[a] += forward ? push : -push;
      const int root = arcs_[path.back().first].source;
      used[root] += push;
      load[end] += push;
      ++result.augmentations;
    }

    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      if (flow[a] < kEps) flow[a] = 0.0;
      result.value += arcs_[a].gain * flow[a];
    }
    return result;
  }

 private:
  std::vector<double> supply_;
  std::vector<double> capacity_;
  std::vector<TransportArc> arcs_;
};

}  // namespace rideshare
