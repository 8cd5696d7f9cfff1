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

// Probabilistic request-vehicle assignment: the feasible set of assignment
// probabilities and the interval wheel that realizes them.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/demand.hpp"

namespace rideshare {

struct AssignmentKey {
  int vehicle = 0;
  int slot = 0;
  RegionId origin = 0;
  RegionId destination = 0;
  int count = 1;

  friend auto operator<=>(const AssignmentKey&, const AssignmentKey&) = default;
};

// y(i, t, v, u, k): probability that k requests v -> u appear in slot t and
// one of them goes to vehicle i. Absent entries are zero.
using AssignmentVector = std::map<AssignmentKey, double>;

inline constexpr double kAssignmentTol = 1e-9;

// 1 - prod_u (1 - s_u), where s_u = sum_k y(i, t, v, u, k).
inline double pickup_probability(std::span<const double> destination_sums) {
  double miss = 1.0;
  for (double s : destination_sums) {
    if (s < -kAssignmentTol || s > 1.0 + kAssignmentTol) {
      fail_invalid("per-destination assignment mass ", s, " outside [0,1]");
    }
    miss *= 1.0 - std::clamp(s, 0.0, 1.0);
  }
  return 1.0 - miss;
}

// Pickup probability of vehicle i in region v at slot t.
inline double pickup_probability(const AssignmentVector& y, int vehicle, int slot,
                                 RegionId origin) {
  std::map<RegionId, double> sums;
  for (auto it = y.lower_bound({vehicle, slot, origin, 0, 0});
       it != y.end() && it->first.vehicle == vehicle && it->first.slot == slot &&
       it->first.origin == origin;
       ++it) {
    sums[it->first.destination] += it->second;
  }
  std::vector<double> s;
  for (const auto& [u, v] : sums) s.push_back(v);
  return pickup_probability(s);
}

enum class AssignmentConstraint {
  kBelowDemand = 4,   // y <= p
  kFeasibility = 5,   // 0 <= y <= z
  kFleetCapacity = 6, // sum_i y <= k * p
};

struct AssignmentViolation {
  AssignmentConstraint constraint;
  AssignmentKey key;  // vehicle is -1 for fleet-wide violations
  double lhs = 0.0;
  double rhs = 0.0;
};

using ProbabilityLookup = std::function<double(int slot, RegionId v, RegionId u, int k)>;
using FeasibilityLookup = std::function<bool(int vehicle, int slot, RegionId v, RegionId u)>;

inline ProbabilityLookup lookup(const DemandModel& model) {
  return [&model](int t, RegionId v, RegionId u, int k) {
    return model.probability(t, v, u, k);
  };
}

// Lists every violated inequality; empty iff y is in the feasible set.
inline std::vector<AssignmentViolation> validate(const AssignmentVector& y,
                                                 const ProbabilityLookup& p,
                                                 const FeasibilityLookup& z) {
  std::vector<AssignmentViolation> out;
  std::map<AssignmentKey, double> fleet;
  for (const auto& [key, value] : y) {
    const double pk = p(key.slot, key.origin, key.destination, key.count);
    if (value > pk + kAssignmentTol) {
      out.push_back({AssignmentConstraint::kBelowDemand, key, value, pk});
    }
    const double zk = z(key.vehicle, key.slot, key.origin, key.destination) ? 1.0 : 0.0;
    if (value < -kAssignmentTol || value > zk + kAssignmentTol) {
      out.push_back({AssignmentConstraint::kFeasibility, key, value, zk});
    }
    AssignmentKey cell = key;
    cell.vehicle = -1;
    fleet[cell] += value;
  }
  for (const auto& [cell, total] : fleet) {
    const double cap =
        cell.count * p(cell.slot, cell.origin, cell.destination, cell.count);
    if (total > cap + kAssignmentTol) {
      out.push_back({AssignmentConstraint::kFleetCapacity, cell, total, cap});
    }
  }
  return out;
}

// Half-open arc [lo, hi) of the unit interval; `closed` extends it to hi.
struct WheelArc {
  double lo = 0.0;
  double hi = 0.0;
  bool closed = false;

  bool contains(double x) const { return x >= lo && (closed ? x <= hi : x < hi); }
  double length() const { return hi - lo; }
};

// Per-vehicle arcs laid end to end around the unit circle with cumulative
// anchors a_i = a_{i-1} + q_i (minus one on wrap-around). Vehicle i owns
// [a_{i-1}, a_i), or [a_{i-1}, 1] U [0, a_i) when the anchor wrapped.
struct WheelLayout {
  std::vector<double> q;
  std::vector<double> anchors;  // a_0 .. a_N
  std::vector<std::vector<WheelArc>> arcs;

  int size() const { return static_cast<int>(q.size()); }

  bool contains(int vehicle, double eta) const {
    for (const auto& arc : arcs[vehicle]) {
      if (arc.contains(eta)) return true;
    }
    return false;
  }

  double length(int vehicle) const {
    double total = 0.0;
    for (const auto& arc : arcs[vehicle]) total += arc.length();
    return total;
  }
};

inline WheelLayout build_wheel_from_q(std::span<const double> q) {
  constexpr double kSnap = 1e-9;
  WheelLayout wheel;
  wheel.anchors.push_back(0.0);
  for (double qi : q) {
    if (!(qi >= -kSnap && qi <= 1.0 + kSnap)) {
      fail_invalid("wheel share ", qi, " outside [0,1]");
    }
    qi = std::clamp(qi, 0.0, 1.0);
    const double prev = wheel.anchors.back();
    double next = prev + qi;
    if (next > 1.0) next -= 1.0;
    std::vector<WheelArc> arcs;
    if (next > prev) {
      arcs.push_back({prev, next, next >= 1.0});
    } else if (next < prev) {
      arcs.push_back({prev, 1.0, true});
      if (next > 0.0) arcs.push_back({0.0, next, false});
    } else {
      // Equal anchors: only q = 0 or q = 1 are meaningful.
      if (qi <= kSnap) {
        qi = 0.0;
      } else if (qi >= 1.0 - kSnap) {
        qi = 1.0;
        arcs.push_back({0.0, 1.0, true});
      } else {
        fail_invalid("degenerate wheel anchor for share ", qi);
      }
    }
    wheel.q.push_back(qi);
    wheel.anchors.push_back(next);
    wheel.arcs.push_back(std::move(arcs));
  }
  return wheel;
}

// q_i = min(y_i / p, z_i) for one (t, v, u, k) event, vehicles in id order.
inline WheelLayout build_wheel(std::span<const double> y, double p,
                               std::span<const std::uint8_t> z) {
  if (y.size() != z.size()) fail_invalid("wheel input size mismatch");
  std::vector<double> q(y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] <= 0.0) continue;
    if (!(p > 0.0)) fail_invalid("positive assignment for an impossible event (p = 0)");
    q[i] = std::min(y[i] / p, z[i] ? 1.0 : 0.0);
  }
  return build_wheel_from_q(q);
}

inline std::vector<int> draw_at(const WheelLayout& wheel, double eta_draw) {
  std::vector<int> assigned;
  for (int i = 0; i < wheel.size(); ++i) {
    if (wheel.contains(i, eta_draw)) assigned.push_back(i);
  }
  return assigned;
}

inline std::vector<int> draw(const WheelLayout& wheel, Rng& rng) {
  return draw_at(wheel, rng.uniform());
}

}  // namespace rideshare
