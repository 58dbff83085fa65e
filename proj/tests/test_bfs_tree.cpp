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

#include "tspanner/bfs_tree.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tspanner/generate.hpp"

namespace tspanner {
namespace {

struct Built {
  Diagram d;
  IntersectionGraph g;
  LeveledTree t;
};

Built build(const Diagram& d) {
  Built b{d, build_graph(d), {}};
  b.t = build_bfs_tree(b.g, b.d);
  return b;
}

TEST(BuildBfsTree, D5LevelsAndParents) {
  const Built b = build(fixture::d5());
  const std::vector<std::vector<Vertex>> levels = {{0}, {1, 2}, {3, 4}};
  EXPECT_EQ(b.t.level_sets, levels);
  EXPECT_EQ(b.t.height(), 2u);
  EXPECT_FALSE(b.t.parent[0].has_value());
  EXPECT_EQ(b.t.parent[1], Vertex{0});
  EXPECT_EQ(b.t.parent[2], Vertex{0});
  EXPECT_EQ(b.t.parent[3], Vertex{2});
  EXPECT_EQ(b.t.parent[4], Vertex{2});
  EXPECT_EQ(b.t.main_path, (std::vector<Vertex>{0, 2, 4}));
  EXPECT_EQ(b.t.fallback_parents, 0u);
}

TEST(BuildBfsTree, D5InternalNodes) {
  const Built b = build(fixture::d5());
  EXPECT_EQ(internal_node_count_per_level(b.t), (std::vector<std::size_t>{1, 1}));
  const auto internal = internal_nodes_per_level(b.t);
  EXPECT_EQ(internal[1], std::vector<Vertex>{2});
}

TEST(BuildBfsTree, SingleVertex) {
  const Built b = build(Diagram{{{1, 2, 1, 2}}});
  EXPECT_EQ(b.t.height(), 0u);
  EXPECT_EQ(b.t.main_path, std::vector<Vertex>{0});
}

TEST(BuildBfsTree, PathGraphIsItsOwnTree) {
  const Built b = build(fixture::chained_path(7));
  EXPECT_EQ(b.t.height(), 6u);
  for (Vertex v = 1; v < 7; ++v) EXPECT_EQ(b.t.parent[v], v - 1);
}

TEST(BuildBfsTree, ThrowsWhenDisconnected) {
  const Diagram d{{{1, 2, 1, 2}, {3, 4, 3, 4}}};
  const IntersectionGraph g = build_graph(d);
  EXPECT_THROW(build_bfs_tree(g, d), DisconnectedGraph);
}

TEST(BuildBfsTree, RejectsSizeMismatch) {
  const IntersectionGraph g = build_graph(fixture::d5());
  EXPECT_THROW(build_bfs_tree(g, Diagram{}), std::invalid_argument);
}

TEST(MaxVertex, PicksLargestCorner) {
  const Diagram d = fixture::d5();
  EXPECT_EQ(max_b_vertex(d, {1, 2}), 2u);
  EXPECT_EQ(max_d_vertex(d, {0, 1}), 0u);
}

// Levels are exact distances; each parent is adjacent and one level up;
// the dominating-parent rule never falls back; and same-level internal
// nodes are ordered and adjacent.
TEST(BuildBfsTreeProperty, LayeringAndInternalNodes) {
  std::size_t fallbacks = 0, over_two = 0;
  for (const auto& e : fixture::corpus(150, 2, 120, 31)) {
    const Built b = build(generate_random(e.n, e.seed, e.mode));
    SCOPED_TRACE(fixture::describe(e));
    const auto fw = oracle::floyd_warshall(b.g.size(), b.g.edges());
    for (Vertex v = 0; v < b.g.size(); ++v) {
      EXPECT_EQ(b.t.level[v], fw[0][v]);
      if (v == 0) continue;
      ASSERT_TRUE(b.t.parent[v].has_value());
      EXPECT_TRUE(b.g.adjacent(v, *b.t.parent[v]));
      EXPECT_EQ(b.t.level[*b.t.parent[v]] + 1, b.t.level[v]);
    }
    EXPECT_EQ(b.t.main_path.front(), 0u);
    EXPECT_EQ(b.t.main_path.back(), b.g.size() - 1);
    const InternalNodeFindings f = check_internal_nodes(b.t, b.g, b.d);
    EXPECT_TRUE(f.ordering.empty());
    EXPECT_TRUE(f.adjacency.empty());
    fallbacks += b.t.fallback_parents;
    over_two += f.levels_over_two;
  }
  EXPECT_EQ(fallbacks, 0u);
  EXPECT_EQ(over_two, 0u);
}

// Fault injection: the checker works on any leveled parent array, so these
// trees are built by hand rather than by the dominating-parent rule.
TEST(CheckInternalNodes, FlagsCrossingPair) {
  const Diagram d = fixture::d5();
  const IntersectionGraph g = build_graph(d);
  LeveledTree t = build_bfs_tree(g, d);
  t.parent[3] = 1;  // vertex 4 now hangs from 2; b_3 > b_2 and d_3 > d_2
  const InternalNodeFindings f = check_internal_nodes(t, g, d);
  EXPECT_EQ(internal_node_count_per_level(t)[1], 2u);
  EXPECT_EQ(f.ordering.size(), 1u);
  EXPECT_TRUE(f.adjacency.empty());
}

TEST(CheckInternalNodes, FlagsNonAdjacentPair) {
  const std::vector<Edge> edges = {{0, 1}, {0, 2}, {1, 3}, {2, 4}};
  const IntersectionGraph g(5, edges);
  // Only b and d matter to the checker.
  const Diagram d{{{0, 1, 0, 9}, {0, 2, 0, 5}, {0, 3, 0, 4}, {0, 4, 0, 1},
                   {0, 5, 0, 2}}};
  LeveledTree t;
  t.parent = {std::nullopt, 0, 0, 1, 2};
  t.level = {0, 1, 1, 2, 2};
  t.level_sets = {{0}, {1, 2}, {3, 4}};
  const InternalNodeFindings f = check_internal_nodes(t, g, d);
  EXPECT_TRUE(f.ordering.empty());
  EXPECT_EQ(f.adjacency.size(), 1u);
}

TEST(CheckInternalNodes, CountsCrowdedLevels) {
  const std::vector<Edge> edges = {{0, 1}, {0, 2}, {0, 3}, {1, 4},
                                   {2, 5}, {3, 6}};
  const IntersectionGraph g(7, edges);
  const Diagram d{{{0, 1, 0, 1}, {0, 2, 0, 7}, {0, 3, 0, 6}, {0, 4, 0, 5},
                   {0, 5, 0, 4}, {0, 6, 0, 3}, {0, 7, 0, 2}}};
  LeveledTree t;
  t.parent = {std::nullopt, 0, 0, 0, 1, 2, 3};
  t.level = {0, 1, 1, 1, 2, 2, 2};
  t.level_sets = {{0}, {1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(check_internal_nodes(t, g, d).levels_over_two, 1u);
}

}  // namespace
}  // namespace tspanner
