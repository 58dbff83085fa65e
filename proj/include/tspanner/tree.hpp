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

// Parent-array spanning trees and the tree file format:
//
//   n
//   p_1 p_2 ... p_n        (1-based parent ids, 0 for the root)

#ifndef TSPANNER_TREE_HPP_
#define TSPANNER_TREE_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tspanner/diagram.hpp"
#include "tspanner/graph.hpp"

namespace tspanner {

using ParentArray = std::vector<std::optional<Vertex>>;

// Per-level parent-assignment classes. For level i: `to_previous` holds the
// vertices hung from the spine vertex one level up, `to_same` those hung
// from the level's own spine vertex, and `to_next` those hung from the
// spine vertex one level down.
struct LevelAssignment {
  std::vector<Vertex> to_previous;
  std::vector<Vertex> to_same;
  std::vector<Vertex> to_next;
};

struct SpannerTree {
  ParentArray parent;
  std::vector<LevelAssignment> assignments;  // indexed by level

  std::size_t size() const { return parent.size(); }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Vertex v = 0; v < parent.size(); ++v) {
      if (parent[v]) {
        out.emplace_back(std::min(v, *parent[v]), std::max(v, *parent[v]));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct TreeCheck {
  bool ok = true;
  std::string reason;
};

// A parent array spans g iff it has exactly one root, every link is an edge
// of g, and following parents from any vertex reaches the root.
inline TreeCheck check_spanning_tree(const IntersectionGraph& g,
                                     const ParentArray& parent) {
  const std::size_t n = g.size();
  if (parent.size() != n) {
    return {false, "tree has " + std::to_string(parent.size()) +
                       " vertices, graph has " + std::to_string(n)};
  }
  std::size_t roots = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!parent[v]) {
      ++roots;
      continue;
    }
    const Vertex p = *parent[v];
    if (p >= n) return {false, "parent out of range at " + std::to_string(v + 1)};
    if (p == v || !g.adjacent(v, p)) {
      return {false, "link " + std::to_string(v + 1) + "-" +
                         std::to_string(p + 1) + " is not a graph edge"};
    }
  }
  if (n > 0 && roots != 1) {
    return {false, "expected one root, found " + std::to_string(roots)};
  }
  // 0 = unvisited, 1 = on the current walk, 2 = reaches the root.
  std::vector<char> state(n, 0);
  for (Vertex start = 0; start < n; ++start) {
    std::vector<Vertex> walk;
    Vertex v = start;
    while (state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      if (!parent[v]) break;
      v = *parent[v];
    }
    if (state[v] == 1 && parent[v]) {
      return {false, "cycle through vertex " + std::to_string(v + 1)};
    }
    for (Vertex w : walk) state[w] = 2;
  }
  return {};
}

inline std::string serialize_tree(const ParentArray& parent) {
  std::ostringstream out;
  out << parent.size() << '\n';
  for (Vertex v = 0; v < parent.size(); ++v) {
    if (v) out << ' ';
    out << (parent[v] ? *parent[v] + 1 : 0);
  }
  out << '\n';
  return out.str();
}

inline ParentArray parse_tree(std::string_view text) {
  std::vector<std::string_view> lines;
  std::vector<std::size_t> numbers;
  std::size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = detail::trim(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') {
      lines.push_back(line);
      numbers.push_back(line_no);
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (lines.empty()) throw ParseError(0, "missing vertex count");
  Coord count = 0;
  const auto head = detail::split_fields(lines[0]);
  if (head.size() != 1 || !detail::parse_integer(head[0], count) || count < 0) {
    throw ParseError(numbers[0], "expected a non-negative vertex count");
  }
  const auto n = static_cast<std::size_t>(count);
  std::vector<std::string_view> fields;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    for (auto f : detail::split_fields(lines[k])) fields.push_back(f);
  }
  if (fields.size() != n) {
    throw ParseError(lines.size() > 1 ? numbers[1] : 0,
                     "expected " + std::to_string(n) + " parent entries, found " +
                         std::to_string(fields.size()));
  }
  ParentArray parent(n);
  for (std::size_t v = 0; v < n; ++v) {
    Coord p = 0;
    if (!detail::parse_integer(fields[v], p) || p < 0 ||
        static_cast<std::size_t>(p) > n) {
      throw ParseError(numbers.size() > 1 ? numbers[1] : 0,
                       "bad parent entry '" + std::string(fields[v]) + "'");
    }
    if (p > 0) parent[v] = static_cast<Vertex>(p - 1);
  }
  return parent;
}

}  // namespace tspanner

#endif  // TSPANNER_TREE_HPP_
