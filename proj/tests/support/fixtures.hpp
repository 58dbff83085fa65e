// Copyright 2026 The tspanner Authors
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

// Shared instances and the random corpus schedule.

#ifndef TSPANNER_TESTS_SUPPORT_FIXTURES_HPP_
#define TSPANNER_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tspanner/diagram.hpp"
#include "tspanner/generate.hpp"

namespace tspanner::fixture {

// Five trapezoids; edges 12 13 23 24 34 35 45, levels {1} {2,3} {4,5}.
inline constexpr char kD5[] =
    "5\n1 4 2 5\n2 6 1 3\n3 7 4 8\n5 9 6 9\n8 10 7 10\n";

inline Diagram d5() { return parse_diagram(kD5); }

// Intervals [3i+1, 3i+5]: only consecutive ones overlap, so the graph is
// the path 1-2-...-n. Ends are 1 and 2 mod 3, hence all distinct.
inline Diagram chained_path(std::size_t n) {
  Diagram d;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = static_cast<Coord>(3 * i + 1);
    d.trapezoids.push_back({lo, lo + 4, lo, lo + 4});
  }
  return d;
}

struct CorpusEntry {
  std::size_t n;
  Mode mode;
  std::uint64_t seed;
};

// Sizes uniform in [lo, hi], mode uniform unless fixed; deterministic.
inline std::vector<CorpusEntry> corpus(std::size_t count, std::size_t lo,
                                       std::size_t hi, std::uint64_t schedule,
                                       const Mode* fixed = nullptr) {
  Rng rng(schedule);
  std::vector<CorpusEntry> out;
  for (std::size_t k = 0; k < count; ++k) {
    CorpusEntry e;
    e.n = rng.between(lo, hi);
    e.mode = fixed ? *fixed : static_cast<Mode>(rng.below(3));
    e.seed = rng.next();
    out.push_back(e);
  }
  return out;
}

inline std::string describe(const CorpusEntry& e) {
  return "n=" + std::to_string(e.n) + " mode=" + std::string(to_string(e.mode)) +
         " seed=" + std::to_string(e.seed);
}

}  // namespace tspanner::fixture

#endif  // TSPANNER_TESTS_SUPPORT_FIXTURES_HPP_
