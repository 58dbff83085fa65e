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

#include "tspanner/graph.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tspanner/generate.hpp"

namespace tspanner {
namespace {

std::set<Edge> edge_set(const IntersectionGraph& g) {
  const auto edges = g.edges();
  return {edges.begin(), edges.end()};
}

std::set<Edge> relabel(const std::set<Edge>& edges,
                       const std::vector<Vertex>& perm) {
  std::set<Edge> out;
  for (auto [u, v] : edges) {
    out.insert({std::min(perm[u], perm[v]), std::max(perm[u], perm[v])});
  }
  return out;
}

TEST(BuildGraph, D5Edges) {
  const IntersectionGraph g = build_graph(fixture::d5());
  EXPECT_EQ(g.edge_count(), 7u);
  const std::set<Edge> expected = {{0, 1}, {0, 2}, {1, 2}, {1, 3},
                                   {2, 3}, {2, 4}, {3, 4}};
  EXPECT_EQ(edge_set(g), expected);
}

TEST(BuildGraph, ChainedIntervalsFormAPath) {
  const IntersectionGraph g = build_graph(fixture::chained_path(6));
  EXPECT_EQ(g.edge_count(), 5u);
  for (Vertex v = 0; v + 1 < 6; ++v) EXPECT_TRUE(g.adjacent(v, v + 1));
}

TEST(BuildGraph, SingleVertexHasNoEdges) {
  const IntersectionGraph g = build_graph(Diagram{{{1, 2, 1, 2}}});
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

// The ordered predicate agrees with the two-sided geometric test.
TEST(BuildGraphProperty, MatchesGeometricOracle) {
  for (const auto& e : fixture::corpus(120, 1, 50, 21)) {
    const Diagram d = generate_random(e.n, e.seed, e.mode);
    EXPECT_EQ(edge_set(build_graph(d)), oracle::geometric_edges(d))
        << fixture::describe(e);
  }
}

// The branch-free row fill matches the edge-list constructor bit for bit.
TEST(BuildGraphProperty, PredicateFillMatchesEdgeList) {
  for (const auto& e : fixture::corpus(40, 1, 140, 25)) {
    const Diagram d = generate_random(e.n, e.seed, e.mode);
    const IntersectionGraph g = build_graph(d);
    const auto oracle_edges = oracle::geometric_edges(d);
    const std::vector<Edge> list(oracle_edges.begin(), oracle_edges.end());
    EXPECT_EQ(g, IntersectionGraph(e.n, list)) << fixture::describe(e);
    EXPECT_EQ(g.edge_count(), list.size());
    EXPECT_EQ(g.edges(), list);
  }
}

TEST(BuildGraphProperty, IntervalModeMatchesIntervalOverlap) {
  for (const auto& e : fixture::corpus(60, 1, 50, 22)) {
    Rng rng(e.seed);
    const auto intervals = detail::random_intervals(e.n, rng);
    Diagram raw;
    for (auto [lo, hi] : intervals) raw.trapezoids.push_back({lo, hi, lo, hi});
    const CanonicalForm c = canonicalize(raw);
    EXPECT_EQ(edge_set(build_graph(c.diagram)),
              relabel(oracle::interval_edges(intervals), c.permutation));
  }
}

TEST(BuildGraphProperty, PermutationModeMatchesInversions) {
  for (const auto& e : fixture::corpus(60, 1, 50, 23)) {
    Rng rng(e.seed);
    std::vector<Coord> top(e.n), bottom(e.n);
    for (std::size_t i = 0; i < e.n; ++i) top[i] = bottom[i] = Coord(i + 1);
    rng.shuffle(bottom);
    Diagram raw;
    for (std::size_t i = 0; i < e.n; ++i) {
      raw.trapezoids.push_back({top[i], top[i], bottom[i], bottom[i]});
    }
    const CanonicalForm c = canonicalize(raw);
    EXPECT_EQ(edge_set(build_graph(c.diagram)),
              relabel(oracle::inversion_edges(top, bottom), c.permutation));
  }
}

TEST(IntersectionGraph, MergesDuplicatesAndSortsNeighbours) {
  const std::vector<Edge> edges = {{0, 3}, {0, 1}, {1, 0}, {0, 2}};
  const IntersectionGraph g(4, edges);
  EXPECT_EQ(g.edge_count(), 3u);
  const auto nb = g.neighbors(0);
  EXPECT_EQ(std::vector<Vertex>(nb.begin(), nb.end()),
            (std::vector<Vertex>{1, 2, 3}));
  EXPECT_TRUE(g.adjacent(3, 0));
  EXPECT_FALSE(g.adjacent(1, 2));
}

TEST(IntersectionGraph, RejectsBadEdges) {
  const std::vector<Edge> loop = {{1, 1}};
  const std::vector<Edge> far = {{0, 5}};
  EXPECT_THROW(IntersectionGraph(3, loop), std::invalid_argument);
  EXPECT_THROW(IntersectionGraph(3, far), std::out_of_range);
}

TEST(IntersectionGraph, RowBitsMatchAdjacency) {
  const IntersectionGraph g = build_graph(generate_random(130, 4, Mode::kGeneral));
  for (Vertex u = 0; u < g.size(); ++u) {
    const auto row = g.row(u);
    for (Vertex v = 0; v < g.size(); ++v) {
      EXPECT_EQ(((row[v / 64] >> (v % 64)) & 1u) != 0, g.adjacent(u, v));
    }
  }
}

TEST(VertexBitset, SetOperations) {
  VertexBitset a(100, std::vector<Vertex>{1, 64, 99});
  VertexBitset b(100, std::vector<Vertex>{1, 64, 99, 5});
  VertexBitset c(100, std::vector<Vertex>{2, 65});
  EXPECT_TRUE(a.subset_of(b.words()));
  EXPECT_FALSE(b.subset_of(a.words()));
  EXPECT_TRUE(a.disjoint(c.words()));
  EXPECT_FALSE(a.disjoint(b.words()));
  VertexBitset d = b;
  d.intersect(c.words());
  EXPECT_TRUE(d.none());
  b.reset(5);
  EXPECT_FALSE(b.test(5));
  EXPECT_TRUE(b.subset_of(a.words()));
}

TEST(BfsDistances, D5FromRoot) {
  const auto dist = bfs_distances(build_graph(fixture::d5()), 0);
  const std::vector<Distance> expected = {0, 1, 1, 2, 2};
  EXPECT_EQ(dist, expected);
}

TEST(BfsDistances, UnreachableIsEmpty) {
  const std::vector<Edge> edges = {{0, 1}};
  const IntersectionGraph g(3, edges);
  EXPECT_FALSE(bfs_distances(g, 0)[2].has_value());
  EXPECT_FALSE(is_connected(g));
  EXPECT_THROW(bfs_distances(g, 7), std::out_of_range);
}

TEST(BfsDistancesProperty, MatchesFloydWarshallAndIsLipschitz) {
  for (const auto& e : fixture::corpus(40, 2, 45, 24)) {
    const IntersectionGraph g =
        build_graph(generate_random(e.n, e.seed, e.mode));
    const auto fw = oracle::floyd_warshall(g.size(), g.edges());
    const DistanceMatrix all = all_pairs_distances(g);
    for (Vertex u = 0; u < g.size(); ++u) {
      for (Vertex v = 0; v < g.size(); ++v) {
        ASSERT_TRUE(all.at(u, v).has_value());
        EXPECT_EQ(*all.at(u, v), fw[u][v]);
      }
    }
    for (auto [u, v] : g.edges()) {
      const auto du = *all.at(0, u), dv = *all.at(0, v);
      EXPECT_LE(du > dv ? du - dv : dv - du, 1u);
    }
  }
}

}  // namespace
}  // namespace tspanner
