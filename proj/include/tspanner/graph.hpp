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

#ifndef TSPANNER_GRAPH_HPP_
#define TSPANNER_GRAPH_HPP_

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tspanner/diagram.hpp"

namespace tspanner {

using Edge = std::pair<Vertex, Vertex>;  // first < second

// Undirected simple graph stored as an adjacency bit matrix: constant-time
// edge queries, and row scans of n / 64 words. Dense trapezoid graphs make
// the matrix far smaller than adjacency lists.
class IntersectionGraph {
 public:
  IntersectionGraph() = default;

  // Builds from an edge list; duplicate edges are merged. Throws on
  // self-loops or out-of-range endpoints.
  IntersectionGraph(std::size_t n, std::span<const Edge> edges)
      : n_(n), words_per_row_((n + 63) / 64), bits_(n * words_per_row_, 0) {
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw std::out_of_range("edge endpoint");
      if (u == v) throw std::invalid_argument("self-loop");
      if (adjacent(u, v)) continue;
      set_bit(u, v);
      set_bit(v, u);
      ++m_;
    }
  }

  // Builds from a predicate over vertex pairs u < v. Each row is filled
  // word by word without branching on the predicate, at the price of
  // evaluating both halves of the matrix.
  template <typename Adjacent>
  static IntersectionGraph from_predicate(std::size_t n, Adjacent&& adjacent) {
    IntersectionGraph g;
    g.n_ = n;
    g.words_per_row_ = (n + 63) / 64;
    g.bits_.assign(n * g.words_per_row_, 0);
    for (Vertex u = 0; u < n; ++u) {
      std::uint64_t* row = g.bits_.data() + u * g.words_per_row_;
      for (std::size_t k = 0; k < g.words_per_row_; ++k) {
        const Vertex lo = k * 64, hi = std::min(n, lo + 64);
        std::uint64_t word = 0;
        for (Vertex v = lo; v < hi; ++v) {
          const bool edge = v < u ? adjacent(v, u) : v > u && adjacent(u, v);
          word |= std::uint64_t{edge} << (v - lo);
        }
        row[k] = word;
        g.m_ += std::popcount(word);
      }
    }
    g.m_ /= 2;
    return g;
  }

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return m_; }

  // Ascending. Decoded from the row on each call.
  std::vector<Vertex> neighbors(Vertex v) const {
    std::vector<Vertex> out;
    const auto words = row(v);
    for (std::size_t k = 0; k < words.size(); ++k) {
      for (std::uint64_t w = words[k]; w; w &= w - 1) {
        out.push_back(k * 64 + std::countr_zero(w));
      }
    }
    return out;
  }

  // Adjacency row of v as packed 64-bit words (bit w set iff v ~ w).
  std::span<const std::uint64_t> row(Vertex v) const {
    return {bits_.data() + v * words_per_row_, words_per_row_};
  }

  bool adjacent(Vertex u, Vertex v) const {
    return (bits_[u * words_per_row_ + v / 64] >> (v % 64)) & 1u;
  }

  // Sorted, first < second.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (Vertex u = 0; u < n_; ++u) {
      const auto words = row(u);
      for (std::size_t k = (u + 1) / 64; k < words.size(); ++k) {
        std::uint64_t w = words[k];
        if (k == (u + 1) / 64) w &= ~std::uint64_t{0} << ((u + 1) % 64);
        for (; w; w &= w - 1) out.emplace_back(u, k * 64 + std::countr_zero(w));
      }
    }
    return out;
  }

  friend bool operator==(const IntersectionGraph& x,
                         const IntersectionGraph& y) {
    return x.n_ == y.n_ && x.bits_ == y.bits_;
  }

 private:
  void set_bit(Vertex u, Vertex v) {
    bits_[u * words_per_row_ + v / 64] |= std::uint64_t{1} << (v % 64);
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Fixed-capacity vertex set over packed words, sized like a graph row.
class VertexBitset {
 public:
  VertexBitset() = default;
  explicit VertexBitset(std::size_t n) : words_((n + 63) / 64, 0) {}
  template <typename Range>
  VertexBitset(std::size_t n, const Range& vertices) : VertexBitset(n) {
    for (Vertex v : vertices) set(v);
  }

  void set(Vertex v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }
  void reset(Vertex v) { words_[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
  bool test(Vertex v) const { return (words_[v / 64] >> (v % 64)) & 1u; }
  std::uint64_t word(std::size_t k) const { return words_[k]; }

  // True iff this and `other` share no vertex.
  bool disjoint(std::span<const std::uint64_t> other) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & other[k]) return false;
    }
    return true;
  }

  // True iff every vertex of this set is in `other`.
  bool subset_of(std::span<const std::uint64_t> other) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & ~other[k]) return false;
    }
    return true;
  }

  // this & other, in place.
  VertexBitset& intersect(std::span<const std::uint64_t> other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other[k];
    return *this;
  }

  bool none() const {
    for (std::uint64_t w : words_) {
      if (w) return false;
    }
    return true;
  }

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  std::vector<std::uint64_t> words_;
};

// Ordered intersection test for canonical trapezoids with left.b < right.b.
inline bool intersects(const Trapezoid& left, const Trapezoid& right) {
  return right.a < left.b || right.c < left.d;
}

// O(n^2) construction over all canonical pairs.
inline IntersectionGraph build_graph(const Diagram& canonical) {
  return IntersectionGraph::from_predicate(
      canonical.size(), [&](Vertex i, Vertex j) {
        return intersects(canonical[i], canonical[j]);
      });
}

// Hop distance; std::nullopt means unreachable.
using Distance = std::optional<std::uint32_t>;

// Bit-parallel: each dequeued vertex ANDs its adjacency row with the
// unvisited set, O(n^2 / 64) words in all. The bit matrix stays in cache
// where dense adjacency lists would not.
inline std::vector<Distance> bfs_distances(const IntersectionGraph& g,
                                           Vertex source) {
  std::vector<Distance> dist(g.size());
  if (source >= g.size()) throw std::out_of_range("bfs source");
  VertexBitset unvisited(g.size());
  for (Vertex v = 0; v < g.size(); ++v) unvisited.set(v);
  unvisited.reset(source);
  std::vector<Vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    const auto row = g.row(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      for (std::uint64_t w = row[k] & unvisited.word(k); w; w &= w - 1) {
        const Vertex v = k * 64 + std::countr_zero(w);
        dist[v] = *dist[u] + 1;
        unvisited.reset(v);
        queue.push_back(v);
      }
    }
  }
  return dist;
}

inline bool is_connected(const IntersectionGraph& g) {
  if (g.size() == 0) return true;
  const auto dist = bfs_distances(g, 0);
  return std::all_of(dist.begin(), dist.end(),
                     [](const Distance& d) { return d.has_value(); });
}

class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t size() const { return n_; }
  Distance at(Vertex u, Vertex v) const { return cells_[u * n_ + v]; }
  void set_row(Vertex u, const std::vector<Distance>& row) {
    std::copy(row.begin(), row.end(), cells_.begin() + u * n_);
  }

 private:
  std::size_t n_;
  std::vector<Distance> cells_;
};

// n BFS runs; meant for verification on modest n.
inline DistanceMatrix all_pairs_distances(const IntersectionGraph& g) {
  DistanceMatrix matrix(g.size());
  for (Vertex u = 0; u < g.size(); ++u) matrix.set_row(u, bfs_distances(g, u));
  return matrix;
}

}  // namespace tspanner

#endif  // TSPANNER_GRAPH_HPP_
