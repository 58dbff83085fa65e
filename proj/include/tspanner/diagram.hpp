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

// Trapezoid diagrams: the geometric model behind a trapezoid graph.
//
// A diagram is two horizontal lines carrying n intervals each. Trapezoid i
// spans [a, b] on the top line and [c, d] on the bottom line. Only the
// relative order of coordinates matters, so canonical diagrams store ranks.

#ifndef TSPANNER_DIAGRAM_HPP_
#define TSPANNER_DIAGRAM_HPP_

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tspanner {

using Coord = std::int64_t;

// Zero-based vertex index. File formats and printed output use 1-based ids.
using Vertex = std::size_t;

struct Trapezoid {
  Coord a = 0;  // top-left
  Coord b = 0;  // top-right
  Coord c = 0;  // bottom-left
  Coord d = 0;  // bottom-right

  friend auto operator<=>(const Trapezoid&, const Trapezoid&) = default;
};

struct Diagram {
  std::vector<Trapezoid> trapezoids;

  std::size_t size() const { return trapezoids.size(); }
  bool empty() const { return trapezoids.empty(); }
  const Trapezoid& operator[](Vertex v) const { return trapezoids[v]; }
  Trapezoid& operator[](Vertex v) { return trapezoids[v]; }

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

enum class Mode { kGeneral, kInterval, kPermutation };

inline std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kGeneral:
      return "general";
    case Mode::kInterval:
      return "interval";
    case Mode::kPermutation:
      return "permutation";
  }
  return "unknown";
}

inline Mode parse_mode(std::string_view text) {
  if (text == "general") return Mode::kGeneral;
  if (text == "interval") return Mode::kInterval;
  if (text == "permutation") return Mode::kPermutation;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected general|interval|permutation)");
}

// Raised for malformed diagram text. `line()` is 1-based; 0 means the error
// is not tied to a specific line (e.g. a premature end of input).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised when an operation requires a valid diagram and gets an invalid one.
class InvalidDiagram : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos >= s.size()) break;
    std::size_t end = pos;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
    fields.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

// Whole-field decimal integer; rejects empty fields, trailing junk and
// overflow.
inline bool parse_integer(std::string_view field, Coord& out) {
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end && !field.empty();
}

// Assigns 1-based ranks to the distinct values of `values`, preserving order
// and equalities.
// Values 2k and 2k+1 are trapezoid k's endpoints on one line. Sets `shared`
// when two trapezoids use the same value.
inline std::vector<Coord> rank_compress(const std::vector<Coord>& values,
                                        bool& shared) {
  std::vector<std::pair<Coord, std::size_t>> keyed(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) keyed[i] = {values[i], i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<Coord> ranks(values.size());
  Coord rank = 0;
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    if (k == 0 || keyed[k].first != keyed[k - 1].first) {
      ++rank;
    } else if (keyed[k].second / 2 != keyed[k - 1].second / 2) {
      shared = true;
    }
    ranks[keyed[k].second] = rank;
  }
  return ranks;
}

}  // namespace detail

// Parses the diagram file format: a count line followed by n lines of
// "a b c d". Blank lines and lines starting with '#' are skipped. The
// result keeps file order; call canonicalize() before building a graph.
inline Diagram parse_diagram(std::string_view text) {
  Diagram diagram;
  std::size_t expected = 0;
  bool have_count = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto fields = detail::split_fields(line);
    if (!have_count) {
      Coord count = 0;
      if (fields.size() != 1 || !detail::parse_integer(fields[0], count) ||
          count < 0) {
        throw ParseError(line_no, "expected a non-negative vertex count");
      }
      expected = static_cast<std::size_t>(count);
      have_count = true;
    } else {
      if (fields.size() != 4) {
        throw ParseError(line_no, "expected 4 coordinates, found " +
                                      std::to_string(fields.size()));
      }
      if (diagram.size() == expected) {
        throw ParseError(line_no, "expected " + std::to_string(expected) +
                                      " trapezoids, found more");
      }
      Coord v[4];
      for (int k = 0; k < 4; ++k) {
        if (!detail::parse_integer(fields[k], v[k])) {
          throw ParseError(line_no, "non-integer coordinate '" +
                                        std::string(fields[k]) + "'");
        }
      }
      diagram.trapezoids.push_back({v[0], v[1], v[2], v[3]});
    }
    if (end == text.size()) break;
  }
  if (!have_count) throw ParseError(0, "missing vertex count");
  if (diagram.size() != expected) {
    throw ParseError(0, "expected " + std::to_string(expected) +
                            " trapezoids, found " +
                            std::to_string(diagram.size()));
  }
  return diagram;
}

inline std::string serialize(const Diagram& diagram) {
  std::ostringstream out;
  out << diagram.size() << '\n';
  for (const Trapezoid& t : diagram.trapezoids) {
    out << t.a << ' ' << t.b << ' ' << t.c << ' ' << t.d << '\n';
  }
  return out.str();
}

enum class ViolationKind {
  kTopInverted,          // a > b
  kBottomInverted,       // c > d
  kDuplicateTopEndpoint,
  kDuplicateBottomEndpoint,
};

struct Violation {
  ViolationKind kind;
  std::vector<Vertex> indices;  // zero-based, in diagram order
  std::string message;
};

using ValidationReport = std::vector<Violation>;

// Reports every violated diagram invariant. A trapezoid with a == b (or
// c == d) contributes one endpoint to its line; all contributed endpoints on
// a line must be pairwise distinct.
inline ValidationReport validate(const Diagram& diagram) {
  ValidationReport report;
  for (Vertex v = 0; v < diagram.size(); ++v) {
    const Trapezoid& t = diagram[v];
    if (t.a > t.b) {
      report.push_back({ViolationKind::kTopInverted, {v},
                        "trapezoid " + std::to_string(v + 1) + ": a > b"});
    }
    if (t.c > t.d) {
      report.push_back({ViolationKind::kBottomInverted, {v},
                        "trapezoid " + std::to_string(v + 1) + ": c > d"});
    }
  }
  const auto check_line = [&](bool top) {
    std::vector<std::pair<Coord, Vertex>> points;
    points.reserve(2 * diagram.size());
    for (Vertex v = 0; v < diagram.size(); ++v) {
      const Trapezoid& t = diagram[v];
      const Coord lo = top ? t.a : t.c;
      const Coord hi = top ? t.b : t.d;
      points.emplace_back(lo, v);
      if (hi != lo) points.emplace_back(hi, v);
    }
    std::sort(points.begin(), points.end());
    for (std::size_t i = 0; i < points.size();) {
      std::size_t j = i;
      while (j < points.size() && points[j].first == points[i].first) ++j;
      if (j - i > 1) {
        std::vector<Vertex> who;
        for (std::size_t k = i; k < j; ++k) who.push_back(points[k].second);
        who.erase(std::unique(who.begin(), who.end()), who.end());
        std::string msg = std::string(top ? "top" : "bottom") +
                          " endpoint " + std::to_string(points[i].first) +
                          " shared by trapezoids";
        for (Vertex w : who) msg += " " + std::to_string(w + 1);
        report.push_back({top ? ViolationKind::kDuplicateTopEndpoint
                              : ViolationKind::kDuplicateBottomEndpoint,
                          std::move(who), std::move(msg)});
      }
      i = j;
    }
  };
  check_line(true);
  check_line(false);
  return report;
}

struct CanonicalForm {
  Diagram diagram;
  // permutation[old_index] == canonical index.
  std::vector<Vertex> permutation;
};

// Sorts trapezoids by top-right endpoint and rank-compresses each line.
// The rank sweep doubles as the validity check; validate() runs only to
// word the error.
inline CanonicalForm canonicalize(const Diagram& diagram) {
  const auto reject = [&] {
    throw InvalidDiagram(validate(diagram).front().message);
  };
  const std::size_t n = diagram.size();
  std::vector<std::pair<Coord, Vertex>> by_b(n);
  for (Vertex v = 0; v < n; ++v) {
    const Trapezoid& t = diagram[v];
    if (t.a > t.b || t.c > t.d) reject();
    by_b[v] = {t.b, v};
  }
  std::sort(by_b.begin(), by_b.end());

  std::vector<Coord> top(2 * n), bottom(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Trapezoid& t = diagram[by_b[i].second];
    top[2 * i] = t.a;
    top[2 * i + 1] = t.b;
    bottom[2 * i] = t.c;
    bottom[2 * i + 1] = t.d;
  }
  bool shared = false;
  const auto top_rank = detail::rank_compress(top, shared);
  const auto bottom_rank = detail::rank_compress(bottom, shared);
  if (shared) reject();

  CanonicalForm out;
  out.diagram.trapezoids.resize(n);
  out.permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.diagram.trapezoids[i] = {top_rank[2 * i], top_rank[2 * i + 1],
                                 bottom_rank[2 * i], bottom_rank[2 * i + 1]};
    out.permutation[by_b[i].second] = i;
  }
  return out;
}

inline bool is_canonical(const Diagram& diagram) {
  if (!validate(diagram).empty()) return false;
  return canonicalize(diagram).diagram == diagram;
}

}  // namespace tspanner

#endif  // TSPANNER_DIAGRAM_HPP_
