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

// Marking of all alternative shortest paths from the root to the deepest
// BFS level. The result is the subgraph M*: the marked vertices P_i of each
// level together with every graph edge joining P_i to P_{i+1}.

#ifndef TSPANNER_MASPT_HPP_
#define TSPANNER_MASPT_HPP_

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tspanner/bfs_tree.hpp"
#include "tspanner/graph.hpp"

namespace tspanner {

struct MarkedSubgraph {
  std::vector<char> marked;
  std::vector<std::vector<Vertex>> P;      // marked, per level, ascending
  std::vector<std::vector<Vertex>> F;      // L_i - P_i
  std::vector<Edge> edges;                 // (level i, level i+1) pairs

  bool is_marked(Vertex v) const { return marked[v] != 0; }
};

// Sweeps levels bottom-up: L_h is marked outright, and a vertex of L_i is
// marked iff it has a marked neighbour in L_{i+1}. Each L_i vertex ANDs its
// adjacency row with P_{i+1}: O(n^2 / 64) words. A second sweep writes the
// M* edges into storage sized by the first.
inline MarkedSubgraph mark_shortest_paths(const IntersectionGraph& g,
                                          const LeveledTree& tree) {
  MarkedSubgraph m;
  const std::size_t n = g.size();
  m.marked.assign(n, 0);
  const std::size_t levels = tree.level_sets.size();
  m.P.resize(levels);
  m.F.resize(levels);
  if (levels == 0) return m;

  const std::size_t h = levels - 1;
  for (Vertex v : tree.level_set(h)) m.marked[v] = 1;
  m.P[h] = tree.level_set(h);
  std::vector<VertexBitset> masks(levels);
  masks[h] = VertexBitset(n, m.P[h]);
  std::size_t total = 0;
  for (std::size_t i = h; i-- > 0;) {
    const auto mask = masks[i + 1].words();
    for (Vertex v : tree.level_set(i)) {
      const auto row = g.row(v);
      std::size_t count = 0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        count += std::popcount(row[k] & mask[k]);
      }
      total += count;
      if (count) {
        m.marked[v] = 1;
        m.P[i].push_back(v);
      } else {
        m.F[i].push_back(v);
      }
    }
    masks[i] = VertexBitset(n, m.P[i]);
  }

  m.edges.reserve(total);
  for (std::size_t i = h; i-- > 0;) {
    const auto mask = masks[i + 1].words();
    for (Vertex v : m.P[i]) {
      const auto row = g.row(v);
      for (std::size_t k = 0; k < row.size(); ++k) {
        for (std::uint64_t w = row[k] & mask[k]; w; w &= w - 1) {
          m.edges.emplace_back(v, Vertex(k * 64 + std::countr_zero(w)));
        }
      }
    }
  }
  return m;
}

struct MarkedCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks the marking against a distance oracle: v in L_i is marked iff some
// w in L_h has d(v, w) = h - i. Also checks that no F_i vertex touches
// P_{i+1}.
inline MarkedCheck verify_marked_semantics(const IntersectionGraph& g,
                                           const LeveledTree& tree,
                                           const MarkedSubgraph& m) {
  MarkedCheck check;
  const auto fail = [&](std::string what) {
    check.ok = false;
    check.violations.push_back(std::move(what));
  };
  if (tree.level_sets.empty()) return check;
  const std::size_t h = tree.height();
  const DistanceMatrix dist = all_pairs_distances(g);
  for (Vertex v = 0; v < g.size(); ++v) {
    const std::size_t i = tree.level[v];
    bool on_path = false;
    for (Vertex w : tree.level_set(h)) {
      const Distance d = dist.at(v, w);
      if (d && *d == h - i) {
        on_path = true;
        break;
      }
    }
    if (on_path != m.is_marked(v)) {
      fail("vertex " + std::to_string(v + 1) +
           (on_path ? " lies on a shortest path to the last level but is "
                      "unmarked"
                    : " is marked but lies on no shortest path to the last "
                      "level"));
    }
  }
  for (std::size_t i = 0; i < tree.level_sets.size(); ++i) {
    const bool in_p = m.P.size() > i;
    for (Vertex v : tree.level_set(i)) {
      const bool listed =
          in_p && std::find(m.P[i].begin(), m.P[i].end(), v) != m.P[i].end();
      if (listed != m.is_marked(v)) {
        fail("P_" + std::to_string(i) + " disagrees with the mark of vertex " +
             std::to_string(v + 1));
      }
    }
  }
  for (std::size_t i = 0; i + 1 < tree.level_sets.size(); ++i) {
    for (Vertex f : tree.level_set(i)) {
      if (m.is_marked(f)) continue;
      for (Vertex w : tree.level_set(i + 1)) {
        if (m.is_marked(w) && g.adjacent(f, w)) {
          fail("unmarked vertex " + std::to_string(f + 1) +
               " is adjacent to marked vertex " + std::to_string(w + 1) +
               " one level deeper");
        }
      }
    }
  }
  return check;
}

}  // namespace tspanner

#endif  // TSPANNER_MASPT_HPP_
