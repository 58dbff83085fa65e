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

// Stretch verification for spanning trees.
//
// A spanning tree T of G is a tree t-spanner iff d_T(u, v) <= t for every
// edge (u, v) of G: any shortest G-path of length L then maps to a T-walk
// of length at most t * L. max_edge_stretch() uses that shortcut;
// all_pairs_stretch_check() is the definitional check it is tested against.

#ifndef TSPANNER_VERIFY_HPP_
#define TSPANNER_VERIFY_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tspanner/graph.hpp"
#include "tspanner/tree.hpp"

namespace tspanner {

// Depth-indexed parent array answering tree-path lengths by climbing both
// endpoints to their lowest common ancestor.
class TreeIndex {
 public:
  explicit TreeIndex(const ParentArray& parent)
      : parent_(parent), depth_(parent.size(), kUnset) {
    for (Vertex v = 0; v < parent_.size(); ++v) resolve(v);
  }

  std::size_t depth(Vertex v) const { return depth_[v]; }

  std::size_t distance(Vertex u, Vertex v) const {
    std::size_t steps = 0;
    while (depth_[u] > depth_[v]) {
      u = *parent_[u];
      ++steps;
    }
    while (depth_[v] > depth_[u]) {
      v = *parent_[v];
      ++steps;
    }
    while (u != v) {
      u = *parent_[u];
      v = *parent_[v];
      steps += 2;
    }
    return steps;
  }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  void resolve(Vertex v) {
    std::vector<Vertex> chain;
    while (depth_[v] == kUnset) {
      if (!parent_[v]) {
        depth_[v] = 0;
        break;
      }
      chain.push_back(v);
      if (chain.size() > parent_.size()) {
        throw std::invalid_argument("parent array contains a cycle");
      }
      v = *parent_[v];
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth_[*it] = depth_[*parent_[*it]] + 1;
    }
  }

  const ParentArray& parent_;
  std::vector<std::size_t> depth_;
};

inline std::size_t tree_distance(const ParentArray& tree, Vertex u, Vertex v) {
  return TreeIndex(tree).distance(u, v);
}

struct StretchViolation {
  Vertex u;
  Vertex v;
  std::size_t tree_distance;

  friend bool operator==(const StretchViolation&,
                         const StretchViolation&) = default;
};

struct StretchReport {
  std::size_t max_edge_stretch = 0;
  std::size_t threshold = 3;
  std::vector<StretchViolation> violations;

  bool ok() const { return violations.empty(); }

  // "max_stretch=K threshold=T violations=[(u,v,d) ...]", 1-based ids.
  std::string to_text() const {
    std::ostringstream out;
    out << "max_stretch=" << max_edge_stretch << " threshold=" << threshold
        << " violations=[";
    for (std::size_t k = 0; k < violations.size(); ++k) {
      if (k) out << ' ';
      out << '(' << violations[k].u + 1 << ',' << violations[k].v + 1 << ','
          << violations[k].tree_distance << ')';
    }
    out << ']';
    return out.str();
  }
};

// The tree must span g (see check_spanning_tree).
inline StretchReport max_edge_stretch(const IntersectionGraph& g,
                                      const ParentArray& tree,
                                      std::size_t threshold) {
  StretchReport report;
  report.threshold = threshold;
  const TreeIndex index(tree);
  for (auto [u, v] : g.edges()) {
    const std::size_t d = index.distance(u, v);
    report.max_edge_stretch = std::max(report.max_edge_stretch, d);
    if (d > threshold) report.violations.push_back({u, v, d});
  }
  return report;
}

inline IntersectionGraph tree_as_graph(const ParentArray& tree) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < tree.size(); ++v) {
    if (tree[v]) edges.emplace_back(std::min(v, *tree[v]), std::max(v, *tree[v]));
  }
  return IntersectionGraph(tree.size(), edges);
}

// d_T(u, v) <= t * d_G(u, v) for every pair, from two all-pairs BFS tables.
inline bool all_pairs_stretch_check(const IntersectionGraph& g,
                                    const ParentArray& tree,
                                    std::size_t threshold) {
  const DistanceMatrix dg = all_pairs_distances(g);
  const DistanceMatrix dt = all_pairs_distances(tree_as_graph(tree));
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex v = u + 1; v < g.size(); ++v) {
      const Distance a = dg.at(u, v), b = dt.at(u, v);
      if (!a) continue;
      if (!b || *b > threshold * *a) return false;
    }
  }
  return true;
}

inline constexpr std::size_t kExhaustiveLimit = 9;

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class SpanningTreeSearch {
 public:
  explicit SpanningTreeSearch(const IntersectionGraph& g)
      : g_(g), edges_(g.edges()), uf_(g.size()) {
    for (Vertex v = 0; v < g.size(); ++v) uf_[v] = v;
  }

  std::size_t run() {
    const std::size_t n = g_.size();
    if (n <= 1) return 0;
    // A non-tree graph forces some edge off the tree, with stretch >= 2.
    floor_ = edges_.size() == n - 1 ? 1 : 2;
    best_ = static_cast<std::size_t>(-1);
    chosen_.clear();
    recurse(0, 0);
    return best_;
  }

 private:
  Vertex find(Vertex v) const {
    while (uf_[v] != v) v = uf_[v];
    return v;
  }

  void recurse(std::size_t next_edge, std::size_t components_merged) {
    if (best_ == floor_) return;
    const std::size_t n = g_.size();
    if (components_merged == n - 1) {
      evaluate();
      return;
    }
    if (edges_.size() - next_edge < n - 1 - components_merged) return;
    const auto [u, v] = edges_[next_edge];
    const Vertex ru = find(u), rv = find(v);
    if (ru != rv) {
      uf_[ru] = rv;  // no path compression, so undo is one assignment
      chosen_.push_back(edges_[next_edge]);
      recurse(next_edge + 1, components_merged + 1);
      chosen_.pop_back();
      uf_[ru] = ru;
    }
    recurse(next_edge + 1, components_merged);
  }

  void evaluate() {
    const IntersectionGraph t(g_.size(), chosen_);
    std::size_t worst = 0;
    for (auto [u, v] : edges_) {
      const auto d = bfs_distances(t, u)[v];
      worst = std::max<std::size_t>(worst, *d);
      if (worst >= best_) return;
    }
    best_ = worst;
  }

  const IntersectionGraph& g_;
  std::vector<Edge> edges_;
  std::vector<Vertex> uf_;
  std::vector<Edge> chosen_;
  std::size_t best_ = 0;
  std::size_t floor_ = 1;
};

}  // namespace detail

// Minimum, over all spanning trees of g, of the maximum edge stretch.
// Enumerates trees by include/exclude recursion with cycle pruning.
inline std::size_t exhaustive_best_tree_stretch(const IntersectionGraph& g) {
  if (g.size() > kExhaustiveLimit) {
    throw InstanceTooLarge("exhaustive search supports n <= " +
                           std::to_string(kExhaustiveLimit) + ", got n=" +
                           std::to_string(g.size()));
  }
  if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
  return detail::SpanningTreeSearch(g).run();
}

}  // namespace tspanner

#endif  // TSPANNER_VERIFY_HPP_
