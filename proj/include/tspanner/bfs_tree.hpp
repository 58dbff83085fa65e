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

// Leveled BFS tree rooted at vertex 0 (canonical vertex 1).
//
// Within a level, the vertex with the largest top-right endpoint (B) and the
// one with the largest bottom-right endpoint (D) dominate every other vertex
// of the level on their respective line. Each vertex of the next level is
// hung from B if adjacent, else from D if adjacent, else from its largest-b
// neighbour one level up. The last case is a fallback and is counted.

#ifndef TSPANNER_BFS_TREE_HPP_
#define TSPANNER_BFS_TREE_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tspanner/diagram.hpp"
#include "tspanner/graph.hpp"

namespace tspanner {

class DisconnectedGraph : public std::runtime_error {
 public:
  DisconnectedGraph() : std::runtime_error("graph is not connected") {}
};

struct LeveledTree {
  std::vector<std::optional<Vertex>> parent;  // nullopt at the root
  std::vector<std::size_t> level;
  std::vector<std::vector<Vertex>> level_sets;  // each sorted ascending
  std::vector<Vertex> main_path;                // root .. vertex n-1
  std::size_t fallback_parents = 0;

  std::size_t size() const { return parent.size(); }
  std::size_t height() const {
    return level_sets.empty() ? 0 : level_sets.size() - 1;
  }
  const std::vector<Vertex>& level_set(std::size_t i) const {
    return level_sets[i];
  }
};

inline Vertex max_b_vertex(const Diagram& diagram,
                           const std::vector<Vertex>& vertices) {
  return *std::max_element(vertices.begin(), vertices.end(),
                           [&](Vertex x, Vertex y) {
                             return diagram[x].b < diagram[y].b;
                           });
}

inline Vertex max_d_vertex(const Diagram& diagram,
                           const std::vector<Vertex>& vertices) {
  return *std::max_element(vertices.begin(), vertices.end(),
                           [&](Vertex x, Vertex y) {
                             return diagram[x].d < diagram[y].d;
                           });
}

// Walks parents upward from the highest-indexed vertex.
inline std::vector<Vertex> main_path(const LeveledTree& tree) {
  std::vector<Vertex> path;
  if (tree.size() == 0) return path;
  std::optional<Vertex> v = tree.size() - 1;
  while (v) {
    path.push_back(*v);
    v = tree.parent[*v];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

inline LeveledTree build_bfs_tree(const IntersectionGraph& g,
                                  const Diagram& canonical) {
  const std::size_t n = g.size();
  if (canonical.size() != n) {
    throw std::invalid_argument("diagram and graph sizes differ");
  }
  LeveledTree tree;
  if (n == 0) return tree;

  const auto dist = bfs_distances(g, 0);
  tree.parent.assign(n, std::nullopt);
  tree.level.assign(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (!dist[v]) throw DisconnectedGraph();
    tree.level[v] = *dist[v];
    if (tree.level[v] >= tree.level_sets.size()) {
      tree.level_sets.resize(tree.level[v] + 1);
    }
    tree.level_sets[tree.level[v]].push_back(v);
  }

  for (std::size_t i = 0; i + 1 < tree.level_sets.size(); ++i) {
    const auto& current = tree.level_sets[i];
    const Vertex top = max_b_vertex(canonical, current);
    const Vertex bottom = max_d_vertex(canonical, current);
    for (Vertex v : tree.level_sets[i + 1]) {
      if (g.adjacent(v, top)) {
        tree.parent[v] = top;
      } else if (g.adjacent(v, bottom)) {
        tree.parent[v] = bottom;
      } else {
        std::optional<Vertex> best;
        for (Vertex w : g.neighbors(v)) {
          if (tree.level[w] == i && (!best || canonical[w].b > canonical[*best].b)) {
            best = w;
          }
        }
        tree.parent[v] = best;
        ++tree.fallback_parents;
      }
    }
  }
  tree.main_path = main_path(tree);
  return tree;
}

// Number of distinct parents used by each level's children, for levels
// 0..h-1.
inline std::vector<std::size_t> internal_node_count_per_level(
    const LeveledTree& tree) {
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i + 1 < tree.level_sets.size(); ++i) {
    std::vector<Vertex> parents;
    for (Vertex v : tree.level_sets[i + 1]) parents.push_back(*tree.parent[v]);
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    counts.push_back(parents.size());
  }
  return counts;
}

inline std::vector<std::vector<Vertex>> internal_nodes_per_level(
    const LeveledTree& tree) {
  std::vector<std::vector<Vertex>> out(tree.level_sets.size());
  for (Vertex v = 0; v < tree.size(); ++v) {
    if (tree.parent[v]) out[tree.level[*tree.parent[v]]].push_back(*tree.parent[v]);
  }
  for (auto& level : out) {
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
  }
  return out;
}

struct InternalNodeFindings {
  std::vector<std::string> ordering;   // same-level internal nodes that cross
  std::vector<std::string> adjacency;  // same-level internal nodes not adjacent
  std::size_t levels_over_two = 0;
};

// Checks that of two same-level internal nodes the one with the larger b has
// the smaller d, and that they are adjacent.
inline InternalNodeFindings check_internal_nodes(const LeveledTree& tree,
                                                 const IntersectionGraph& g,
                                                 const Diagram& canonical) {
  InternalNodeFindings findings;
  const auto internal = internal_nodes_per_level(tree);
  for (std::size_t level = 0; level < internal.size(); ++level) {
    const auto& nodes = internal[level];
    if (nodes.size() > 2) ++findings.levels_over_two;
    for (std::size_t x = 0; x < nodes.size(); ++x) {
      for (std::size_t y = x + 1; y < nodes.size(); ++y) {
        Vertex i = nodes[x], j = nodes[y];
        if (canonical[i].b < canonical[j].b) std::swap(i, j);
        const std::string pair = "level " + std::to_string(level) + ": " +
                                 std::to_string(i + 1) + "," +
                                 std::to_string(j + 1);
        if (!(canonical[i].d < canonical[j].d)) {
          findings.ordering.push_back(pair);
        }
        if (!g.adjacent(i, j)) findings.adjacency.push_back(pair);
      }
    }
  }
  return findings;
}

}  // namespace tspanner

#endif  // TSPANNER_BFS_TREE_HPP_
