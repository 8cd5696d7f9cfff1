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

// Time-dependent request distributions p(t, v, u, k): the probability that
// exactly k requests from region v to region u appear in slot t.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "rideshare/common.hpp"
#include "rideshare/csv.hpp"

namespace rideshare {

struct CellKey {
  int slot = 0;
  RegionId origin = 0;
  RegionId destination = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

// Sparse request distribution. Only k >= 1 is stored; the k = 0 mass is
// implied as 1 - sum_k p so that cells without requests are representable.
class DemandModel {
 public:
  static constexpr double kMassTol = 1e-9;

  DemandModel() = default;
  DemandModel(int horizon, int num_regions, int max_count)
      : horizon_(horizon), num_regions_(num_regions), max_count_(max_count) {
    if (horizon <= 0) fail_invalid("horizon must be positive");
    if (num_regions <= 0) fail_invalid("number of regions must be positive");
    if (max_count <= 0) fail_invalid("K must be positive");
  }

  int horizon() const { return horizon_; }
  int num_regions() const { return num_regions_; }
  int max_count() const { return max_count_; }

  // Sets p(t, v, u, 1..K). Entries are validated; an all-zero row erases
  // the cell.
  void set(int slot, RegionId origin, RegionId destination,
           std::vector<double> probabilities) {
    check_index(slot, origin, destination);
    if (static_cast<int>(probabilities.size()) != max_count_) {
      fail_invalid("expected ", max_count_, " probabilities, got ",
                   probabilities.size());
    }
    double total = 0.0;
    bool any = false;
    for (double p : probabilities) {
      if (!(p >= 0.0 && p <= 1.0)) fail_invalid("probability out of [0,1]: ", p);
      total += p;
      any = any || p > 0.0;
    }
    if (total > 1.0 + kMassTol) {
      fail_invalid("probabilities of cell (", slot, ",", origin, ",",
                   destination, ") sum to ", total, " > 1");
    }
    const CellKey key{slot, origin, destination};
    if (!any) {
      cells_.erase(key);
      return;
    }
    cells_[key] = std::move(probabilities);
  }

  void set(int slot, RegionId origin, RegionId destination, int count, double p) {
    std::vector<double> row(max_count_, 0.0);
    if (auto it = cells_.find({slot, origin, destination}); it != cells_.end()) {
      row = it->second;
    }
    if (count < 1 || count > max_count_) fail_invalid("count out of range: ", count);
    row[count - 1] = p;
    set(slot, origin, destination, std::move(row));
  }

  // p(t, v, u, k); k = 0 gives the implied no-request mass.
  double probability(int slot, RegionId origin, RegionId destination,
                     int count) const {
    if (count < 0 || count > max_count_) return 0.0;
    auto it = cells_.find({slot, origin, destination});
    if (count == 0) {
      if (it == cells_.end()) return 1.0;
      double total = 0.0;
      for (double p : it->second) total += p;
      return std::max(0.0, 1.0 - total);
    }
    if (it == cells_.end()) return 0.0;
    return it->second[count - 1];
  }

  const std::map<CellKey, std::vector<double>>& cells() const { return cells_; }

  // Cells of one slot, in (origin, destination) order.
  auto slot_range(int slot) const {
    return std::pair(cells_.lower_bound({slot, 0, 0}),
                     cells_.lower_bound({slot + 1, 0, 0}));
  }

  // Expected request count sum_k k * p(t, v, u, k) leaving `origin` in `slot`.
  double expected_outflow(int slot, RegionId origin) const {
    double mass = 0.0;
    for (auto it = cells_.lower_bound({slot, origin, 0});
         it != cells_.end() && it->first.slot == slot && it->first.origin == origin;
         ++it) {
      for (int k = 1; k <= max_count_; ++k) mass += k * it->second[k - 1];
    }
    return mass;
  }

  friend bool operator==(const DemandModel&, const DemandModel&) = default;

 private:
  void check_index(int slot, RegionId origin, RegionId destination) const {
    if (slot < 0 || slot >= horizon_) fail_invalid("slot ", slot, " outside horizon");
    if (origin < 0 || origin >= num_regions_ || destination < 0 ||
        destination >= num_regions_) {
      fail_invalid("region pair (", origin, ",", destination, ") out of range");
    }
  }

  int horizon_ = 1;
  int num_regions_ = 1;
  int max_count_ = 1;
  std::map<CellKey, std::vector<double>> cells_;
};

struct TripRecord {
  std::string day;
  int pickup_slot = 0;
  RegionId pickup_region = 0;
  RegionId dropoff_region = 0;
};

// Loads `day,pickup_slot,pickup_region,dropoff_region`; same-region trips are
// dropped here since they carry no routing content.
inline std::vector<TripRecord> load_trip_records(const std::string& path) {
  const csv::Table table = csv::read_file(
      path, {"day", "pickup_slot", "pickup_region", "dropoff_region"});
  const int c_day = table.column("day");
  const int c_slot = table.column("pickup_slot");
  const int c_from = table.column("pickup_region");
  const int c_to = table.column("dropoff_region");
  std::vector<TripRecord> out;
  for (const auto& row : table.rows) {
    TripRecord r;
    r.day = row.fields[c_day];
    if (r.day.empty()) fail_invalid(path, ": line ", row.line, ": empty day tag");
    r.pickup_slot = static_cast<int>(csv::to_int(row.fields[c_slot], path, row.line));
    r.pickup_region = static_cast<int>(csv::to_int(row.fields[c_from], path, row.line));
    r.dropoff_region = static_cast<int>(csv::to_int(row.fields[c_to], path, row.line));
    if (r.pickup_region == r.dropoff_region) continue;
    out.push_back(std::move(r));
  }
  return out;
}

// Empirical distribution: p(t,v,u,k) = (# days with k requests in the cell)
// / num_days. Counts above K are folded into k = K.
inline DemandModel estimate_empirical(std::span<const TripRecord> records,
                                      int num_days, int horizon, int max_count,
                                      int num_regions) {
  if (num_days < 1) fail_invalid("num_days must be at least 1");
  DemandModel model(horizon, num_regions, max_count);
  std::map<std::string, int> day_index;
  std::map<std::pair<CellKey, int>, int> daily_counts;
  for (std::size_t row = 0; row < records.size(); ++row) {
    const TripRecord& r = records[row];
    if (r.pickup_region < 0 || r.pickup_region >= num_regions ||
        r.dropoff_region < 0 || r.dropoff_region >= num_regions) {
      fail_invalid("trip record ", row, ": unknown region id (",
                   r.pickup_region, " -> ", r.dropoff_region, ")");
    }
    if (r.pickup_slot < 0 || r.pickup_slot >= horizon) {
      fail_invalid("trip record ", row, ": pickup slot ", r.pickup_slot,
                   " outside horizon ", horizon);
    }
    if (r.pickup_region == r.dropoff_region) continue;
    auto [it, inserted] =
        day_index.emplace(r.day, static_cast<int>(day_index.size()));
    if (static_cast<int>(day_index.size()) > num_days) {
      fail_invalid("trip record ", row, ": day tag '", r.day,
                   "' exceeds the ", num_days, " counted days");
    }
    ++daily_counts[{CellKey{r.pickup_slot, r.pickup_region, r.dropoff_region},
                    it->second}];
  }
  std::map<CellKey, std::vector<int>> histogram;
  for (const auto& [key, count] : daily_counts) {
    auto& h = histogram[key.first];
    if (h.empty()) h.assign(max_count, 0);
    ++h[std::min(count, max_count) - 1];
  }
  for (const auto& [cell, h] : histogram) {
    std::vector<double> row(max_count);
    for (int k = 0; k < max_count; ++k) {
      row[k] = static_cast<double>(h[k]) / num_days;
    }
    model.set(cell.slot, cell.origin, cell.destination, std::move(row));
  }
  return model;
}

using Realization = std::map<std::pair<RegionId, RegionId>, int>;

// Independent draw of the request count of every (v, u) cell in `slot`.
// Cells drawing k = 0 are omitted. The inverse-CDF walk consumes one uniform
// per stored cell so the stream is stable under changes to other slots.
inline Realization sample_realization(const DemandModel& model, int slot,
                                      std::uint64_t seed) {
  if (slot < 0 || slot >= model.horizon()) {
    fail_invalid("slot ", slot, " outside horizon");
  }
  Rng rng(seed);
  Realization out;
  auto [begin, end] = model.slot_range(slot);
  for (auto it = begin; it != end; ++it) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int k = 1; k <= model.max_count(); ++k) {
      acc += it->second[k - 1];
      if (u < acc) {
        out[{it->first.origin, it->first.destination}] = k;
        break;
      }
    }
  }
  return out;
}

}  // namespace rideshare
