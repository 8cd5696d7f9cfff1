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

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace rideshare {

using RegionId = int;

// Slot counts are small integers; this marks "no path".
inline constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

// Absolute tolerance for objective comparisons; values are bounded by N.
inline constexpr double kObjectiveTol = 1e-9;

// Slack used when taking ceilings of quantities that should be integral
// (e.g. 60 * 1.0 / 15) but may carry rounding noise.
inline constexpr double kCeilSlack = 1e-9;

inline const double kOneMinusInvE = 1.0 - 1.0 / std::exp(1.0);

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void append(std::ostringstream&) {}

template <typename T, typename... Rest>
void append(std::ostringstream& oss, T&& head, Rest&&... rest) {
  oss << std::forward<T>(head);
  append(oss, std::forward<Rest>(rest)...);
}

}  // namespace detail

template <typename... Args>
std::string str_cat(Args&&... args) {
  std::ostringstream oss;
  detail::append(oss, std::forward<Args>(args)...);
  return oss.str();
}

template <typename... Args>
[[noreturn]] void fail_invalid(Args&&... args) {
  throw InvalidInput(str_cat(std::forward<Args>(args)...));
}

inline int ceil_slots(double value) {
  return static_cast<int>(std::ceil(value - kCeilSlack));
}

// Deterministic generator shared by sampling, the assignment wheel and the
// simulator. mt19937_64 output is fully specified by the standard; the
// distributions are not, so uniform draws are derived from raw bits here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer; derives independent stream seeds from (seed, tag).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace rideshare
