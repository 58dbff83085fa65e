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

// Seeded random diagrams. Output is bit-reproducible across platforms: the
// engine is std::mt19937_64 (fully specified by the standard) and bounded
// draws and shuffles are done here rather than through <random>
// distributions, whose algorithms are implementation-defined.

#ifndef TSPANNER_GENERATE_HPP_
#define TSPANNER_GENERATE_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tspanner/diagram.hpp"
#include "tspanner/graph.hpp"

namespace tspanner {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxGenerationAttempts = 100;

namespace detail {

// Shuffle 1..2n and pair consecutive entries into ordered intervals.
inline std::vector<std::pair<Coord, Coord>> random_intervals(std::size_t n,
                                                             Rng& rng) {
  std::vector<Coord> points(2 * n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = static_cast<Coord>(i + 1);
  }
  rng.shuffle(points);
  std::vector<std::pair<Coord, Coord>> intervals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Coord x = points[2 * i], y = points[2 * i + 1];
    intervals[i] = {std::min(x, y), std::max(x, y)};
  }
  return intervals;
}

inline Diagram draw_diagram(std::size_t n, Mode mode, Rng& rng) {
  Diagram diagram;
  diagram.trapezoids.resize(n);
  switch (mode) {
    case Mode::kGeneral: {
      const auto top = random_intervals(n, rng);
      auto bottom = random_intervals(n, rng);
      rng.shuffle(bottom);
      for (std::size_t i = 0; i < n; ++i) {
        diagram.trapezoids[i] = {top[i].first, top[i].second,
                                 bottom[i].first, bottom[i].second};
      }
      break;
    }
    case Mode::kInterval: {
      const auto line = random_intervals(n, rng);
      for (std::size_t i = 0; i < n; ++i) {
        const auto [lo, hi] = line[i];
        diagram.trapezoids[i] = {lo, hi, lo, hi};
      }
      break;
    }
    case Mode::kPermutation: {
      std::vector<Coord> pi(n);
      for (std::size_t i = 0; i < n; ++i) pi[i] = static_cast<Coord>(i + 1);
      rng.shuffle(pi);
      for (std::size_t i = 0; i < n; ++i) {
        const Coord top = static_cast<Coord>(i + 1);
        diagram.trapezoids[i] = {top, top, pi[i], pi[i]};
      }
      break;
    }
  }
  return diagram;
}

}  // namespace detail

// Canonical diagram whose intersection graph is connected. Disconnected
// draws are discarded and redrawn from the same engine stream.
inline Diagram generate_random(std::size_t n, std::uint64_t seed, Mode mode) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Diagram canonical =
        canonicalize(detail::draw_diagram(n, mode, rng)).diagram;
    if (is_connected(build_graph(canonical))) return canonical;
  }
  throw GenerationError("no connected diagram after " +
                        std::to_string(kMaxGenerationAttempts) +
                        " attempts (n=" + std::to_string(n) +
                        ", mode=" + std::string(to_string(mode)) + ")");
}

}  // namespace tspanner

#endif  // TSPANNER_GENERATE_HPP_
