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

// Tree 3-spanner construction for trapezoid graphs.
//
// The output tree is a spine u*_0 = root, u*_1, ..., u*_h with one spine
// vertex per BFS level, plus every other vertex hung from a spine vertex of
// an adjacent level. The spine starts as the BFS path towards the last
// vertex and is rebuilt level by level inside the marked shortest-path
// subgraph M*. At window i the spine is fixed through u*_{i-1}; the
// candidates u'_i (already chosen) and u'_{i+1} (largest-b marked neighbour
// of u'_i) classify the vertices of L_i that neither candidate reaches:
//
//   S   = { x in L_i - u'_i : x !~ u'_i, x !~ u'_{i+1} }
//   S'  = { x in L_i - u'_i - S : x !~ u'_i, x ~ some y in S }
//   S'' = { x in L_i - u'_i - S - S' : x !~ u'_i, x ~ some y in S' }
//   S*  = S + S' + S''
//   D   = { x in S* : x has no neighbour in P_{i+1} - u'_{i+1} }
//
// and a cascade decides whether to keep the candidates, move u*_{i+1} to a
// relay vertex, or move u*_i itself. The cascade's spine is not always good
// enough, so its choice is only the first option of a backtracking search
// over marked spines, pruned by the tree distance of edges whose endpoints
// are already anchored. Every decision lands in a TraceLog.
//
// Wherever a rule prescribes a parent that is not adjacent to the child,
// the child is hung from its largest-b neighbour one level up instead and
// the event is logged, so the output is always a spanning tree. Whether it
// is a 3-spanner is left to verify.hpp.

#ifndef TSPANNER_SPANNER_HPP_
#define TSPANNER_SPANNER_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tspanner/bfs_tree.hpp"
#include "tspanner/diagram.hpp"
#include "tspanner/graph.hpp"
#include "tspanner/maspt.hpp"
#include "tspanner/tree.hpp"

namespace tspanner {

enum class Branch {
  kLemma10,        // S* empty at the first window
  kNoFarVertices,  // S* empty at a later window
  kLemma7,         // an S* vertex escapes through L_{i+1} away from u'_{i+1}
  kLemma8,         // u*_{i+1} moves to a relay next to u'_{i+1}
  kLemma9,         // u*_i moves to a marked vertex adjacent to D
  kDefault,
};

enum class Selector { kNone, kMaxB, kMaxD };

// Where a window's committed (u*_i, u*_{i+1}) came from.
enum class SpineSource {
  kCascade,  // the cascade on the max-b candidate
  kRetry,    // the cascade on the max-d candidate
  kSearch,   // another marked pair, found by backtracking
};

inline std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::kLemma10: return "L10";
    case Branch::kNoFarVertices: return "empty";
    case Branch::kLemma7: return "L7";
    case Branch::kLemma8: return "L8";
    case Branch::kLemma9: return "L9";
    case Branch::kDefault: return "default";
  }
  return "?";
}

inline std::string_view to_string(SpineSource source) {
  switch (source) {
    case SpineSource::kCascade: return "cascade";
    case SpineSource::kRetry: return "retry";
    case SpineSource::kSearch: return "search";
  }
  return "?";
}

inline std::string_view to_string(Selector selector) {
  switch (selector) {
    case Selector::kNone: return "none";
    case Selector::kMaxB: return "max-b";
    case Selector::kMaxD: return "max-d";
  }
  return "?";
}

struct FarSets {
  std::vector<Vertex> s;
  std::vector<Vertex> s_prime;
  std::vector<Vertex> s_double_prime;
  std::vector<Vertex> s_star;  // ascending
};

// The four relay selectors. max_b / max_d pick the next-level relay of the
// L8 branch; max_b_star / max_d_star pick the same-level replacement of the
// L9 branch.
struct SpineMaxima {
  std::optional<Vertex> max_b;
  std::optional<Vertex> max_d;
  std::optional<Vertex> max_b_star;
  std::optional<Vertex> max_d_star;
};

struct SpineState {
  std::vector<std::optional<Vertex>> u_star;  // indexed by level
  std::optional<Vertex> u_prime_current;
  std::optional<Vertex> u_prime_next;
  FarSets sets;
  std::vector<Vertex> d_set;
  SpineMaxima maxima;
};

// Lemma numbers audited during construction.
inline constexpr std::array<int, 4> kAuditedLemmas = {3, 4, 5, 6};

struct LemmaFindings {
  std::array<std::size_t, 12> counts{};  // indexed by lemma number
  std::vector<std::string> examples;     // capped

  void add(int lemma, std::string detail) {
    ++counts[lemma];
    if (examples.size() < kMaxExamples) {
      examples.push_back("L" + std::to_string(lemma) + ": " + std::move(detail));
    }
  }
  void merge(const LemmaFindings& other) {
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
    for (const auto& e : other.examples) {
      if (examples.size() < kMaxExamples) examples.push_back(e);
    }
  }
  std::size_t total() const {
    std::size_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }

  static constexpr std::size_t kMaxExamples = 8;
};

struct FallbackEvent {
  Vertex child;
  std::optional<Vertex> prescribed;
  Vertex assigned;
  std::string reason;
};

struct LevelRecord {
  std::size_t level = 0;
  bool final_level = false;
  std::optional<Vertex> candidate_current;  // u'_i
  std::optional<Vertex> candidate_by_b;     // u'_{i+1}, largest b
  std::optional<Vertex> candidate_by_d;     // u'_{i+1}, largest d
  std::optional<Vertex> analysed_next;      // the u'_{i+1} behind `sets`
  Selector spine_selector = Selector::kNone;
  bool retried = false;
  std::size_t escape_failures_by_b = 0;
  std::optional<std::size_t> escape_failures_by_d;
  FarSets sets;
  std::vector<Vertex> d_set;
  Branch branch = Branch::kDefault;
  Selector cascade_selector = Selector::kNone;
  SpineMaxima maxima;
  std::optional<Vertex> spine_current;  // u*_i
  std::optional<Vertex> spine_next;     // u*_{i+1}
  SpineSource source = SpineSource::kCascade;
  std::size_t options_tried = 0;
  LevelAssignment placed_here;          // C sets of this level
  std::vector<Vertex> placed_below;     // previous level, hung from u*_i
  std::vector<Vertex> placed_below_same;  // previous level, hung from u*_{i-1}
  std::vector<FallbackEvent> fallbacks;
  LemmaFindings lemmas;
};

struct TraceLog {
  std::vector<LevelRecord> levels;
  std::vector<Vertex> spine;
  std::vector<FallbackEvent> spine_fallbacks;
  // Lemma audit on windows whose candidates are consecutive BFS main-path
  // vertices, the setting the lemmas are stated for.
  LemmaFindings main_path_lemmas;
  bool search_succeeded = false;
  bool search_budget_exhausted = false;
  std::size_t search_evaluations = 0;

  std::size_t searched_levels() const {
    std::size_t total = 0;
    for (const auto& r : levels) total += r.source == SpineSource::kSearch;
    return total;
  }

  std::size_t fallback_count() const {
    std::size_t total = spine_fallbacks.size();
    for (const auto& r : levels) total += r.fallbacks.size();
    return total;
  }

  LemmaFindings lemma_totals() const {
    LemmaFindings out;
    for (const auto& r : levels) out.merge(r.lemmas);
    return out;
  }

  std::string to_text() const;
};

struct BuildOptions {
  // Runs the per-window structural lemma checks. They cost extra near
  // quadratic work; benchmarks turn them off.
  bool audit_lemmas = true;
  // Backtracks over marked spine alternatives when the cascade's spine
  // leaves an edge of tree distance > 3. Off gives the plain cascade.
  bool spine_search = true;
  // Option evaluations allowed: per_vertex * n + base. When exhausted the
  // plain cascade spine is used.
  std::size_t search_budget_per_vertex = 32;
  std::size_t search_budget_base = 1024;
};

class SpannerContext {
 public:
  SpannerContext(const Diagram& canonical, const IntersectionGraph& graph,
                 const LeveledTree& bfs, const MarkedSubgraph& marked,
                 BuildOptions options = {})
      : diagram(canonical), graph(graph), bfs(bfs), marked(marked),
        options(options) {
    const std::size_t n = graph.size();
    for (const auto& level : bfs.level_sets) level_bits.emplace_back(n, level);
    for (const auto& level : marked.P) marked_bits.emplace_back(n, level);
    spine.u_star.assign(bfs.level_sets.size(), std::nullopt);
    tree.parent.assign(n, std::nullopt);
    tree.assignments.resize(bfs.level_sets.size());
    assigned.assign(n, 0);
  }

  const Diagram& diagram;
  const IntersectionGraph& graph;
  const LeveledTree& bfs;
  const MarkedSubgraph& marked;
  BuildOptions options;

  std::vector<VertexBitset> level_bits;   // L_i
  std::vector<VertexBitset> marked_bits;  // P_i

  SpineState spine;
  SpannerTree tree;
  TraceLog trace;
  std::vector<char> assigned;

  bool adjacent(Vertex u, Vertex v) const { return graph.adjacent(u, v); }
  const std::vector<Vertex>& level(std::size_t i) const {
    return bfs.level_sets[i];
  }
  const std::vector<Vertex>& marked_level(std::size_t i) const {
    return marked.P[i];
  }
};

namespace detail {

inline bool contains(const std::vector<Vertex>& sorted, Vertex v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

inline bool adjacent_to_any(const SpannerContext& ctx, Vertex v,
                            const std::vector<Vertex>& set) {
  for (Vertex w : set) {
    if (ctx.adjacent(v, w)) return true;
  }
  return false;
}

inline std::optional<Vertex> pick_max_b(const Diagram& diagram,
                                        const std::vector<Vertex>& vs) {
  if (vs.empty()) return std::nullopt;
  return max_b_vertex(diagram, vs);
}

inline std::optional<Vertex> pick_max_d(const Diagram& diagram,
                                        const std::vector<Vertex>& vs) {
  if (vs.empty()) return std::nullopt;
  return max_d_vertex(diagram, vs);
}

inline std::string id(Vertex v) { return std::to_string(v + 1); }

inline std::string id_list(const std::vector<Vertex>& vs) {
  std::string out = "{";
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (k) out += ",";
    out += id(vs[k]);
  }
  return out + "}";
}

inline std::string id_opt(const std::optional<Vertex>& v) {
  return v ? id(*v) : "-";
}

}  // namespace detail

struct CandidateChoice {
  Vertex by_b;
  Vertex by_d;
};

// Neighbours of u'_i in P_{i+1} with the largest b and the largest d.
inline CandidateChoice select_spine_candidate(const SpannerContext& ctx,
                                              std::size_t i, Vertex current) {
  std::vector<Vertex> options;
  for (Vertex x : ctx.marked_level(i + 1)) {
    if (ctx.adjacent(x, current)) options.push_back(x);
  }
  if (options.empty()) {
    throw std::logic_error("spine candidate " + detail::id(current) +
                           " has no marked neighbour at level " +
                           std::to_string(i + 1));
  }
  return {max_b_vertex(ctx.diagram, options),
          max_d_vertex(ctx.diagram, options)};
}

inline FarSets compute_s_sets(const SpannerContext& ctx, std::size_t i,
                              Vertex current, Vertex next) {
  FarSets sets;
  std::vector<Vertex> rest;  // L_i - u'_i, not adjacent to u'_i
  for (Vertex x : ctx.level(i)) {
    if (x == current || ctx.adjacent(x, current)) continue;
    if (!ctx.adjacent(x, next)) {
      sets.s.push_back(x);
    } else {
      rest.push_back(x);
    }
  }
  std::vector<Vertex> still;
  for (Vertex x : rest) {
    if (detail::adjacent_to_any(ctx, x, sets.s)) {
      sets.s_prime.push_back(x);
    } else {
      still.push_back(x);
    }
  }
  for (Vertex x : still) {
    if (detail::adjacent_to_any(ctx, x, sets.s_prime)) {
      sets.s_double_prime.push_back(x);
    }
  }
  sets.s_star = sets.s;
  sets.s_star.insert(sets.s_star.end(), sets.s_prime.begin(),
                     sets.s_prime.end());
  sets.s_star.insert(sets.s_star.end(), sets.s_double_prime.begin(),
                     sets.s_double_prime.end());
  std::sort(sets.s_star.begin(), sets.s_star.end());
  return sets;
}

// S* vertices with no neighbour in P_{i+1} other than u'_{i+1}.
inline std::vector<Vertex> compute_d_set(const SpannerContext& ctx,
                                         std::size_t i, const FarSets& sets,
                                         Vertex next) {
  std::vector<Vertex> d;
  for (Vertex x : sets.s_star) {
    bool escapes = false;
    for (Vertex y : ctx.marked_level(i + 1)) {
      if (y != next && ctx.adjacent(x, y)) {
        escapes = true;
        break;
      }
    }
    if (!escapes) d.push_back(x);
  }
  return d;
}

struct CascadeResult {
  Vertex spine_current;
  Vertex spine_next;
  Branch branch = Branch::kDefault;
  Selector selector = Selector::kNone;
  SpineMaxima maxima;
};

// Decides u*_i and u*_{i+1} from the candidates. Checked in order:
//
//  0. S* empty: keep both candidates.
//  1. Some x in S* has a neighbour y in L_{i+1} - u'_{i+1} with
//     y !~ u'_{i+1}: keep both.
//  2. Some x in S* - D has a neighbour y in P_{i+1} - u'_{i+1} with
//     y ~ u'_{i+1}: keep u'_i and move u*_{i+1} to a relay y adjacent to
//     u'_i and u'_{i+1}; prefer the largest-b relay covering all of S* - D,
//     else the largest-d relay.
//  3. Some x in D reaches, via y in P_i - D - u'_i, a vertex z in
//     P_{i+1} - u'_{i+1} with z ~ u'_{i+1}: move u*_i to the largest-b such
//     y adjacent to u*_{i-1}, then u*_{i+1} to the largest-b neighbour of
//     the new u*_i in P_{i+1}.
//  4. Otherwise keep both.
inline CascadeResult apply_cascade(const SpannerContext& ctx, std::size_t i,
                                   Vertex previous, Vertex current,
                                   Vertex next, const FarSets& sets,
                                   const std::vector<Vertex>& d_set) {
  CascadeResult out{current, next, Branch::kDefault, Selector::kNone, {}};
  const Diagram& dg = ctx.diagram;
  if (sets.s_star.empty()) {
    out.branch = i == 1 ? Branch::kLemma10 : Branch::kNoFarVertices;
    return out;
  }

  for (Vertex x : sets.s_star) {
    for (Vertex y : ctx.level(i + 1)) {
      if (y != next && ctx.adjacent(x, y) && !ctx.adjacent(y, next)) {
        out.branch = Branch::kLemma7;
        return out;
      }
    }
  }

  std::vector<Vertex> not_d;
  for (Vertex x : sets.s_star) {
    if (!detail::contains(d_set, x)) not_d.push_back(x);
  }
  std::vector<Vertex> near_next;  // P_{i+1} - u'_{i+1}, adjacent to u'_{i+1}
  for (Vertex y : ctx.marked_level(i + 1)) {
    if (y != next && ctx.adjacent(y, next)) near_next.push_back(y);
  }

  bool lemma8 = false;
  for (Vertex x : not_d) {
    for (Vertex y : near_next) {
      if (ctx.adjacent(x, y)) {
        lemma8 = true;
        break;
      }
    }
    if (lemma8) break;
  }
  if (lemma8) {
    std::vector<Vertex> relays, covering;
    for (Vertex y : near_next) {
      if (!ctx.adjacent(y, current)) continue;
      relays.push_back(y);
      bool covers = true;
      for (Vertex x : not_d) {
        if (!ctx.adjacent(x, y)) {
          covers = false;
          break;
        }
      }
      if (covers) covering.push_back(y);
    }
    out.maxima.max_b = detail::pick_max_b(dg, covering);
    out.maxima.max_d = detail::pick_max_d(dg, covering);
    if (out.maxima.max_b) {
      out.branch = Branch::kLemma8;
      out.selector = Selector::kMaxB;
      out.spine_next = *out.maxima.max_b;
      return out;
    }
    if (const auto fallback = detail::pick_max_d(dg, relays)) {
      out.maxima.max_d = fallback;
      out.branch = Branch::kLemma8;
      out.selector = Selector::kMaxD;
      out.spine_next = *fallback;
      return out;
    }
  }

  if (!d_set.empty()) {
    std::vector<Vertex> replacements;
    for (Vertex y : ctx.marked_level(i)) {
      if (y == current || detail::contains(d_set, y)) continue;
      if (!ctx.adjacent(y, previous)) continue;
      if (!detail::adjacent_to_any(ctx, y, d_set)) continue;
      if (!detail::adjacent_to_any(ctx, y, near_next)) continue;
      replacements.push_back(y);
    }
    out.maxima.max_b_star = detail::pick_max_b(dg, replacements);
    out.maxima.max_d_star = detail::pick_max_d(dg, replacements);
    if (out.maxima.max_b_star) {
      out.branch = Branch::kLemma9;
      out.selector = Selector::kMaxB;
      out.spine_current = *out.maxima.max_b_star;
      std::vector<Vertex> onward;
      for (Vertex z : ctx.marked_level(i + 1)) {
        if (ctx.adjacent(z, out.spine_current)) onward.push_back(z);
      }
      out.spine_next = max_b_vertex(dg, onward);
      return out;
    }
  }

  out.branch = Branch::kDefault;
  return out;
}

namespace detail {

// Level of the spine vertex each L_i vertex is expected to hang from, given
// the window's spine (u*_{i-1}, u*_i, u*_{i+1}). Mirrors the assignment
// rules below; the level-i spine vertex itself gets i.
inline std::vector<std::size_t> predicted_anchor_levels(
    const SpannerContext& ctx, std::size_t i, Vertex spine_current,
    Vertex spine_next) {
  const auto& level = ctx.level(i);
  std::vector<std::size_t> anchor(level.size(), i);
  std::vector<Vertex> far;
  for (std::size_t k = 0; k < level.size(); ++k) {
    const Vertex x = level[k];
    if (x == spine_current) continue;
    if (!ctx.adjacent(x, spine_current) && !ctx.adjacent(x, spine_next)) {
      anchor[k] = i - 1;
      far.push_back(x);
    }
  }
  for (std::size_t k = 0; k < level.size(); ++k) {
    const Vertex x = level[k];
    if (x == spine_current || anchor[k] == i - 1) continue;
    if (ctx.adjacent(x, spine_current) && adjacent_to_any(ctx, x, far)) {
      anchor[k] = i;
    } else if (ctx.adjacent(x, spine_next)) {
      anchor[k] = i + 1;
    }
  }
  return anchor;
}

}  // namespace detail

// Number of S* vertices that would end up more than one spine step away
// from the anchor of some same-level neighbour (tree distance > 3).
inline std::size_t count_escape_failures(const SpannerContext& ctx,
                                         std::size_t i, Vertex spine_current,
                                         Vertex spine_next,
                                         const FarSets& sets) {
  const auto& level = ctx.level(i);
  const auto anchor =
      detail::predicted_anchor_levels(ctx, i, spine_current, spine_next);
  // Anchors of L_i lie in {i-1, i, i+1}; only the two ends are too far apart.
  const std::size_t n = ctx.graph.size();
  VertexBitset low(n), high(n);
  for (std::size_t k = 0; k < level.size(); ++k) {
    if (anchor[k] + 1 == i) low.set(level[k]);
    if (anchor[k] == i + 1) high.set(level[k]);
  }
  const auto index_of = [&](Vertex v) {
    return static_cast<std::size_t>(
        std::lower_bound(level.begin(), level.end(), v) - level.begin());
  };
  std::size_t failures = 0;
  for (Vertex x : sets.s_star) {
    const std::size_t ax = anchor[index_of(x)];
    const VertexBitset* far = ax + 1 == i ? &high : ax == i + 1 ? &low : nullptr;
    if (far && !far->disjoint(ctx.graph.row(x))) ++failures;
  }
  return failures;
}

// Structural checks on the candidate window; each miss is a finding.
inline void audit_lemmas(const SpannerContext& ctx, std::size_t i,
                         Vertex current, Vertex next, const FarSets& sets,
                         const std::vector<Vertex>& d_set,
                         LemmaFindings& findings) {
  using detail::id;
  const std::size_t n = ctx.graph.size();
  // L_{i+1} - u'_{i+1}
  VertexBitset upper = ctx.level_bits[i + 1];
  upper.reset(next);

  // Lemma 3: a level-i vertex away from u'_i only reaches next-level
  // vertices (other than u'_{i+1}) that u'_i also reaches.
  for (Vertex x : ctx.level(i)) {
    if (x == current || ctx.adjacent(x, current)) continue;
    VertexBitset reach = upper;
    reach.intersect(ctx.graph.row(x));
    if (!reach.subset_of(ctx.graph.row(current))) {
      for (Vertex y : ctx.level(i + 1)) {
        if (reach.test(y) && !ctx.adjacent(y, current)) {
          findings.add(3, "level " + std::to_string(i) + ": x=" + id(x) +
                              " y=" + id(y) + " u'=" + id(current));
          break;
        }
      }
    }
  }

  // Lemma 4: S vertices' next-level neighbours are shared by S' + S''.
  std::vector<Vertex> relay = sets.s_prime;
  relay.insert(relay.end(), sets.s_double_prime.begin(),
               sets.s_double_prime.end());
  for (Vertex x : sets.s) {
    VertexBitset reach = upper;
    reach.intersect(ctx.graph.row(x));
    for (Vertex y : relay) {
      if (!reach.subset_of(ctx.graph.row(y))) {
        findings.add(4, "level " + std::to_string(i) + ": x=" + id(x) +
                            " y=" + id(y));
      }
    }
  }

  // Lemma 5: S' + S'' vertices see every next-level vertex u'_{i+1} misses.
  VertexBitset missed(n);
  for (Vertex y : ctx.level(i + 1)) {
    if (y != next && !ctx.adjacent(y, next)) missed.set(y);
  }
  for (Vertex x : relay) {
    if (!missed.subset_of(ctx.graph.row(x))) {
      findings.add(5, "level " + std::to_string(i) + ": x=" + id(x));
    }
  }

  // Lemma 6: S* - D vertices with no D neighbour reach the next level.
  for (Vertex x : sets.s_star) {
    if (detail::contains(d_set, x)) continue;
    if (detail::adjacent_to_any(ctx, x, d_set)) continue;
    if (ctx.level_bits[i + 1].disjoint(ctx.graph.row(x))) {
      findings.add(6, "level " + std::to_string(i) + ": x=" + id(x));
    }
  }
}

// Audits every window (i, i+1) of the BFS main path.
inline LemmaFindings audit_main_path_lemmas(const SpannerContext& ctx) {
  LemmaFindings findings;
  const auto& path = ctx.bfs.main_path;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const FarSets sets = compute_s_sets(ctx, i, path[i], path[i + 1]);
    const auto d_set = compute_d_set(ctx, i, sets, path[i + 1]);
    audit_lemmas(ctx, i, path[i], path[i + 1], sets, d_set, findings);
  }
  return findings;
}

namespace detail {

// The child's largest-b neighbour one level up. Such a neighbour exists
// for every non-root vertex of a BFS layering.
inline Vertex fallback_parent(const SpannerContext& ctx, Vertex child) {
  const std::size_t lvl = ctx.bfs.level[child];
  std::optional<Vertex> best;
  for (Vertex w : ctx.graph.neighbors(child)) {
    if (ctx.bfs.level[w] + 1 == lvl &&
        (!best || ctx.diagram[w].b > ctx.diagram[*best].b)) {
      best = w;
    }
  }
  if (!best) throw std::logic_error("vertex " + id(child) + " has no parent");
  return *best;
}

inline void attach(SpannerContext& ctx, Vertex child, Vertex parent,
                   std::string_view rule,
                   std::vector<FallbackEvent>& fallbacks) {
  if (ctx.adjacent(child, parent)) {
    ctx.tree.parent[child] = parent;
  } else {
    const Vertex alt = fallback_parent(ctx, child);
    ctx.tree.parent[child] = alt;
    fallbacks.push_back({child, parent, alt,
                         std::string(rule) + ": prescribed parent " +
                             id(parent) + " not adjacent"});
  }
  ctx.assigned[child] = 1;
}

}  // namespace detail

// Parent assignment for window i, with u*_{i-1}, u*_i and u*_{i+1}
// committed:
//  - leftover L_{i-1} vertices hang from u*_i if adjacent, else u*_{i-1};
//  - L_i vertices adjacent to neither u*_i nor u*_{i+1} hang from u*_{i-1};
//  - L_i vertices adjacent to u*_i and to one of those hang from u*_i.
// Everything else in L_i waits for the next window.
inline void assign_parents_level(SpannerContext& ctx, std::size_t i,
                                 LevelRecord& record) {
  const Vertex prev = *ctx.spine.u_star[i - 1];
  const Vertex cur = *ctx.spine.u_star[i];
  const Vertex next = *ctx.spine.u_star[i + 1];
  auto& below = ctx.tree.assignments[i - 1];
  auto& here = ctx.tree.assignments[i];

  for (Vertex x : ctx.level(i - 1)) {
    if (x == prev || ctx.assigned[x]) continue;
    if (ctx.adjacent(x, cur)) {
      detail::attach(ctx, x, cur, "leftover-up", record.fallbacks);
      below.to_next.push_back(x);
      record.placed_below.push_back(x);
    } else {
      detail::attach(ctx, x, prev, "leftover-same", record.fallbacks);
      below.to_same.push_back(x);
      record.placed_below_same.push_back(x);
    }
  }

  for (Vertex x : ctx.level(i)) {
    if (x == cur || ctx.assigned[x]) continue;
    if (!ctx.adjacent(x, cur) && !ctx.adjacent(x, next)) {
      detail::attach(ctx, x, prev, "far", record.fallbacks);
      here.to_previous.push_back(x);
    }
  }
  for (Vertex y : ctx.level(i)) {
    if (y == cur || ctx.assigned[y]) continue;
    if (ctx.adjacent(y, cur) &&
        detail::adjacent_to_any(ctx, y, here.to_previous)) {
      detail::attach(ctx, y, cur, "near-far", record.fallbacks);
      here.to_same.push_back(y);
    }
  }
  record.placed_here = here;
}

// Last level h: every unplaced L_h vertex hangs from u*_{h-1} if adjacent,
// else u*_h; every unplaced L_{h-1} vertex from u*_h if adjacent, else
// u*_{h-1}. Then the spine links themselves are set.
inline void finalize_last_level(SpannerContext& ctx, LevelRecord& record) {
  const std::size_t h = ctx.bfs.height();
  if (h == 0) return;
  const Vertex prev = *ctx.spine.u_star[h - 1];
  const Vertex last = *ctx.spine.u_star[h];
  auto& top = ctx.tree.assignments[h];
  auto& below = ctx.tree.assignments[h - 1];

  for (Vertex y : ctx.level(h)) {
    if (y == last || ctx.assigned[y]) continue;
    if (ctx.adjacent(y, prev)) {
      detail::attach(ctx, y, prev, "final", record.fallbacks);
      top.to_previous.push_back(y);
    } else {
      detail::attach(ctx, y, last, "final", record.fallbacks);
      top.to_same.push_back(y);
    }
  }
  for (Vertex x : ctx.level(h - 1)) {
    if (x == prev || ctx.assigned[x]) continue;
    if (ctx.adjacent(x, last)) {
      detail::attach(ctx, x, last, "final-up", record.fallbacks);
      below.to_next.push_back(x);
      record.placed_below.push_back(x);
    } else {
      detail::attach(ctx, x, prev, "final-same", record.fallbacks);
      below.to_same.push_back(x);
      record.placed_below_same.push_back(x);
    }
  }
  record.placed_here = top;

  for (std::size_t j = 1; j <= h; ++j) {
    const Vertex child = *ctx.spine.u_star[j];
    detail::attach(ctx, child, *ctx.spine.u_star[j - 1], "spine",
                   ctx.trace.spine_fallbacks);
  }
}

struct SpannerResult {
  Diagram canonical;
  std::vector<Vertex> permutation;  // input index -> canonical index
  IntersectionGraph graph;
  LeveledTree bfs;
  MarkedSubgraph marked;
  SpannerTree tree;
  TraceLog trace;
};

namespace detail {

inline Vertex first_spine_candidate(const SpannerContext& ctx) {
  const auto& path = ctx.bfs.main_path;
  if (path.size() > 1 && ctx.marked.is_marked(path[1])) return path[1];
  return max_b_vertex(ctx.diagram, ctx.marked_level(1));
}

struct SpineOption {
  Vertex current;
  Vertex next;
  SpineSource source;
};

// Depth-first search over spines through M*. Window i commits u*_i and a
// tentative u*_{i+1}; at that point every L_{i-1} vertex has a known anchor
// (the level of the spine vertex it will hang from), and an option survives
// only if each prescribed parent is adjacent and no edge inside
// L_{i-2} + L_{i-1} joins vertices whose anchors differ by more than one.
// On a caterpillar those are exactly the edges of tree distance > 3.
//
// The cascade's choice is tried first, then its max-d retry, then every
// other (u*_i, u*_{i+1}) pair in P_i x P_{i+1} by decreasing b. With
// `check` off only the first option is taken at each window, which is the
// plain cascade.
class SpineSearch {
 public:
  SpineSearch(const SpannerContext& ctx, bool check, std::size_t budget)
      : ctx_(ctx), check_(check), budget_(budget), h_(ctx.bfs.height()),
        spine_(h_ + 1), anchor_(ctx.graph.size(), kNoAnchor),
        records_(h_ > 0 ? h_ - 1 : 0) {}

  bool run() {
    spine_[0] = 0;
    spine_[1] = first_spine_candidate(ctx_);
    return descend(1);
  }

  const std::vector<Vertex>& spine() const { return spine_; }
  std::vector<LevelRecord>& records() { return records_; }
  std::size_t evaluations() const { return evaluations_; }
  bool budget_exhausted() const { return budget_hit_; }

 private:
  static constexpr std::size_t kNoAnchor = static_cast<std::size_t>(-1);

  // Whether descend(i) can succeed depends only on u*_{i-3}, u*_{i-2} and
  // u*_{i-1}: they fix the anchors of L_{i-2}, and every later pair is
  // enumerated regardless of the tentative u*_i.
  std::array<Vertex, 4> state_key(std::size_t i) const {
    const Vertex none = ctx_.graph.size();
    return {i, i >= 3 ? spine_[i - 3] : none, i >= 2 ? spine_[i - 2] : none,
            spine_[i - 1]};
  }

  bool descend(std::size_t i) {
    if (check_ && i < h_ && dead_.count(state_key(i))) return false;
    const bool found = explore(i);
    if (check_ && !found && !budget_hit_ && i < h_) dead_.insert(state_key(i));
    return found;
  }

  bool explore(std::size_t i) {
    if (i == h_) {
      if (h_ >= 2 && !place(h_ - 1)) return unplace(h_ - 1);
      if (!place(h_)) {
        unplace(h_);
        if (h_ >= 2) unplace(h_ - 1);
        return false;
      }
      return true;
    }
    LevelRecord& record = records_[i - 1];
    const std::vector<SpineOption> cascade = analyze(i, record);
    std::vector<Edge> tried;
    const auto attempt = [&](const SpineOption& option) {
      const Edge key{option.current, option.next};
      if (std::find(tried.begin(), tried.end(), key) != tried.end()) {
        return false;
      }
      tried.push_back(key);
      if (check_ && ++evaluations_ > budget_) {
        budget_hit_ = true;
        return false;
      }
      spine_[i] = option.current;
      spine_[i + 1] = option.next;
      if (i >= 2 && !place(i - 1)) return unplace(i - 1);
      // Records below this window are rewritten by the recursion.
      LevelRecord& r = records_[i - 1];
      r.source = option.source;
      r.options_tried = tried.size();
      r.spine_current = option.current;
      r.spine_next = option.next;
      if (descend(i + 1)) return true;
      if (i >= 2) unplace(i - 1);
      return false;
    };

    for (const auto& option : cascade) {
      if (attempt(option)) return true;
      if (!check_) return false;
      if (budget_hit_) return false;
    }
    const Vertex prev = spine_[i - 1];
    const Vertex tentative = record.candidate_current.value();
    std::vector<Vertex> currents;
    for (Vertex y : ctx_.marked_level(i)) {
      if (y != tentative && ctx_.adjacent(y, prev)) currents.push_back(y);
    }
    by_decreasing_b(currents);
    currents.insert(currents.begin(), tentative);
    for (Vertex y : currents) {
      std::vector<Vertex> nexts;
      for (Vertex z : ctx_.marked_level(i + 1)) {
        if (ctx_.adjacent(y, z)) nexts.push_back(z);
      }
      by_decreasing_b(nexts);
      for (Vertex z : nexts) {
        if (attempt({y, z, SpineSource::kSearch})) return true;
        if (budget_hit_) return false;
      }
    }
    return false;
  }

  void by_decreasing_b(std::vector<Vertex>& vs) const {
    std::sort(vs.begin(), vs.end(), [&](Vertex x, Vertex y) {
      return ctx_.diagram[x].b > ctx_.diagram[y].b;
    });
  }

  // Runs the cascade for the window and fills the record's analysis
  // fields. Returns the cascade's choice, then its alternative if distinct.
  std::vector<SpineOption> analyze(std::size_t i, LevelRecord& record) {
    record = LevelRecord{};
    record.level = i;
    const Vertex prev = spine_[i - 1];
    const Vertex current = spine_[i];
    record.candidate_current = current;
    const CandidateChoice choice = select_spine_candidate(ctx_, i, current);
    record.candidate_by_b = choice.by_b;
    record.candidate_by_d = choice.by_d;

    struct Window {
      Vertex next;
      FarSets sets;
      std::vector<Vertex> d_set;
      CascadeResult cascade;
      std::size_t failures;
    };
    const auto evaluate = [&](Vertex next) {
      Window w{next, compute_s_sets(ctx_, i, current, next), {}, {}, 0};
      w.d_set = compute_d_set(ctx_, i, w.sets, next);
      w.cascade = apply_cascade(ctx_, i, prev, current, next, w.sets, w.d_set);
      w.failures = count_escape_failures(ctx_, i, w.cascade.spine_current,
                                         w.cascade.spine_next, w.sets);
      return w;
    };

    Window chosen = evaluate(choice.by_b);
    std::optional<Window> other;
    record.spine_selector = Selector::kMaxB;
    record.escape_failures_by_b = chosen.failures;
    if (chosen.failures > 0 && choice.by_d != choice.by_b) {
      Window alt = evaluate(choice.by_d);
      record.retried = true;
      record.escape_failures_by_d = alt.failures;
      if (alt.failures < chosen.failures) {
        std::swap(chosen, alt);
        record.spine_selector = Selector::kMaxD;
      }
      other = std::move(alt);
    }
    record.analysed_next = chosen.next;
    record.sets = chosen.sets;
    record.d_set = chosen.d_set;
    record.branch = chosen.cascade.branch;
    record.cascade_selector = chosen.cascade.selector;
    record.maxima = chosen.cascade.maxima;

    const SpineSource first = record.spine_selector == Selector::kMaxD
                                  ? SpineSource::kRetry
                                  : SpineSource::kCascade;
    std::vector<SpineOption> out{
        {chosen.cascade.spine_current, chosen.cascade.spine_next, first}};
    if (other) {
      out.push_back({other->cascade.spine_current, other->cascade.spine_next,
                     first == SpineSource::kRetry ? SpineSource::kCascade
                                                  : SpineSource::kRetry});
    }
    return out;
  }

  // Anchors L_i against the committed spine. The rules mirror
  // assign_parents_level and finalize_last_level.
  bool place(std::size_t i) {
    const auto& level = ctx_.level(i);
    const Vertex own = spine_[i];
    bool ok = true;
    const auto hang = [&](Vertex x, Vertex parent, std::size_t at) {
      anchor_[x] = at;
      if (!ctx_.adjacent(x, parent)) ok = false;
    };
    if (i == h_) {
      const Vertex prev = spine_[h_ - 1];
      for (Vertex y : level) {
        if (y == own) continue;
        if (ctx_.adjacent(y, prev)) {
          hang(y, prev, h_ - 1);
        } else {
          hang(y, own, h_);
        }
      }
    } else {
      const Vertex prev = spine_[i - 1];
      const Vertex next = spine_[i + 1];
      far_.clear();
      for (Vertex x : level) {
        if (x == own) continue;
        if (!ctx_.adjacent(x, own) && !ctx_.adjacent(x, next)) {
          hang(x, prev, i - 1);
          far_.push_back(x);
        }
      }
      for (Vertex x : level) {
        if (x == own || anchor_[x] != kNoAnchor) continue;
        if (ctx_.adjacent(x, own) && adjacent_to_any(ctx_, x, far_)) {
          anchor_[x] = i;
        } else if (ctx_.adjacent(x, next)) {
          anchor_[x] = i + 1;
        } else {
          anchor_[x] = i;
        }
      }
    }
    if (!check_ || !ok) return !check_ || ok;
    // Anchors on L_{i-1} + L_i lie in [i-2, i+1]; class k holds anchor
    // i-2+k. x fails iff its row meets a class two or more away.
    const std::size_t n = ctx_.graph.size();
    std::array<VertexBitset, 4> cls;
    for (auto& c : cls) c = VertexBitset(n);
    const auto add_level = [&](std::size_t j) {
      for (Vertex y : ctx_.level(j)) {
        if (anchor_[y] != kNoAnchor) cls[anchor_[y] + 2 - i].set(y);
      }
    };
    add_level(i);
    if (i >= 1) add_level(i - 1);
    for (Vertex x : level) {
      if (x == own) continue;
      const std::size_t kx = anchor_[x] + 2 - i;
      for (std::size_t k = 0; k < cls.size(); ++k) {
        if ((k > kx ? k - kx : kx - k) > 1 &&
            !cls[k].disjoint(ctx_.graph.row(x))) {
          return false;
        }
      }
    }
    return true;
  }

  // Clears the anchors of L_i. Always false, for tail calls on failure.
  bool unplace(std::size_t i) {
    for (Vertex x : ctx_.level(i)) anchor_[x] = kNoAnchor;
    return false;
  }

  const SpannerContext& ctx_;
  bool check_;
  std::size_t budget_;
  std::size_t h_;
  std::vector<Vertex> spine_;
  std::vector<std::size_t> anchor_;  // kNoAnchor for spine and unplaced
  std::vector<Vertex> far_;
  std::vector<LevelRecord> records_;
  std::set<std::array<Vertex, 4>> dead_;
  std::size_t evaluations_ = 0;
  bool budget_hit_ = false;
};

}  // namespace detail

// Runs the construction on prepared inputs. The context owns the result.
//
// The spine is chosen first (see detail::SpineSearch), then parents are
// assigned window by window against the final spine.
inline void run_spanner(SpannerContext& ctx) {
  const std::size_t h = ctx.bfs.height();
  const std::size_t n = ctx.graph.size();
  if (n == 0) return;
  ctx.assigned[0] = 1;
  ctx.spine.u_star[0] = Vertex{0};
  if (h == 0) {
    ctx.trace.spine = {0};
    return;
  }

  if (ctx.options.audit_lemmas) {
    ctx.trace.main_path_lemmas = audit_main_path_lemmas(ctx);
  }
  const std::size_t budget =
      ctx.options.search_budget_per_vertex * n + ctx.options.search_budget_base;
  std::optional<detail::SpineSearch> search;
  if (ctx.options.spine_search) {
    search.emplace(ctx, true, budget);
    ctx.trace.search_succeeded = search->run();
    ctx.trace.search_evaluations = search->evaluations();
    ctx.trace.search_budget_exhausted = search->budget_exhausted();
  }
  if (!search || !ctx.trace.search_succeeded) {
    search.emplace(ctx, false, 0);
    search->run();
  }

  const auto& spine = search->spine();
  for (std::size_t j = 0; j <= h; ++j) ctx.spine.u_star[j] = spine[j];
  auto& records = search->records();
  for (std::size_t i = 1; i < h; ++i) {
    LevelRecord& record = records[i - 1];
    ctx.spine.u_prime_current = record.candidate_current;
    ctx.spine.u_prime_next = record.analysed_next;
    ctx.spine.sets = record.sets;
    ctx.spine.d_set = record.d_set;
    ctx.spine.maxima = record.maxima;
    if (ctx.options.audit_lemmas) {
      audit_lemmas(ctx, i, *record.candidate_current, *record.analysed_next,
                   record.sets, record.d_set, record.lemmas);
    }
    assign_parents_level(ctx, i, record);
    ctx.trace.levels.push_back(std::move(record));
  }

  LevelRecord final_record;
  final_record.level = h;
  final_record.final_level = true;
  final_record.spine_current = ctx.spine.u_star[h];
  finalize_last_level(ctx, final_record);
  ctx.trace.levels.push_back(std::move(final_record));

  for (const auto& v : ctx.spine.u_star) ctx.trace.spine.push_back(*v);
}

// Canonicalizes, builds the graph, BFS tree and M*, and runs the spanner
// construction. Throws InvalidDiagram or DisconnectedGraph.
inline SpannerResult build_tree3spanner(const Diagram& input,
                                        BuildOptions options = {}) {
  SpannerResult result;
  CanonicalForm canon = canonicalize(input);
  result.canonical = std::move(canon.diagram);
  result.permutation = std::move(canon.permutation);
  result.graph = build_graph(result.canonical);
  result.bfs = build_bfs_tree(result.graph, result.canonical);
  result.marked = mark_shortest_paths(result.graph, result.bfs);

  SpannerContext ctx(result.canonical, result.graph, result.bfs,
                     result.marked, options);
  run_spanner(ctx);
  const TreeCheck check = check_spanning_tree(result.graph, ctx.tree.parent);
  if (!check.ok) {
    throw std::logic_error("spanner construction produced a non-tree: " +
                           check.reason);
  }
  result.tree = std::move(ctx.tree);
  result.trace = std::move(ctx.trace);
  return result;
}

inline std::string TraceLog::to_text() const {
  using detail::id;
  using detail::id_list;
  using detail::id_opt;
  std::ostringstream out;
  out << "spine " << id_list(spine) << '\n';
  out << "search succeeded=" << (search_succeeded ? "yes" : "no")
      << " evaluations=" << search_evaluations
      << " budget_exhausted=" << (search_budget_exhausted ? "yes" : "no")
      << '\n';
  for (const auto& r : levels) {
    out << "level " << r.level << (r.final_level ? " final" : "") << '\n';
    if (!r.final_level) {
      out << "  candidate u'=" << id_opt(r.candidate_current)
          << " next(max-b)=" << id_opt(r.candidate_by_b)
          << " next(max-d)=" << id_opt(r.candidate_by_d)
          << " selector=" << to_string(r.spine_selector)
          << " retried=" << (r.retried ? "yes" : "no")
          << " escape_failures=" << r.escape_failures_by_b;
      if (r.escape_failures_by_d) out << "/" << *r.escape_failures_by_d;
      out << '\n';
      out << "  S=" << id_list(r.sets.s) << " S'=" << id_list(r.sets.s_prime)
          << " S''=" << id_list(r.sets.s_double_prime)
          << " S*=" << id_list(r.sets.s_star) << " D=" << id_list(r.d_set)
          << '\n';
      out << "  branch=" << to_string(r.branch)
          << " selector=" << to_string(r.cascade_selector)
          << " max_b=" << id_opt(r.maxima.max_b)
          << " max_d=" << id_opt(r.maxima.max_d)
          << " max_b*=" << id_opt(r.maxima.max_b_star)
          << " max_d*=" << id_opt(r.maxima.max_d_star) << '\n';
      out << "  spine " << id_opt(r.spine_current) << " -> "
          << id_opt(r.spine_next) << " source=" << to_string(r.source)
          << " options_tried=" << r.options_tried << '\n';
    } else {
      out << "  spine " << id_opt(r.spine_current) << '\n';
    }
    out << "  C_up=" << id_list(r.placed_here.to_previous)
        << " C_same=" << id_list(r.placed_here.to_same)
        << " below_up=" << id_list(r.placed_below)
        << " below_same=" << id_list(r.placed_below_same) << '\n';
    for (const auto& f : r.fallbacks) {
      out << "  fallback child=" << id(f.child)
          << " prescribed=" << id_opt(f.prescribed)
          << " assigned=" << id(f.assigned) << " (" << f.reason << ")\n";
    }
    for (const auto& e : r.lemmas.examples) out << "  finding " << e << '\n';
  }
  for (const auto& e : main_path_lemmas.examples) {
    out << "main-path finding " << e << '\n';
  }
  for (const auto& f : spine_fallbacks) {
    out << "spine-fallback child=" << id(f.child)
        << " assigned=" << id(f.assigned) << " (" << f.reason << ")\n";
  }
  return out.str();
}

}  // namespace tspanner

#endif  // TSPANNER_SPANNER_HPP_
