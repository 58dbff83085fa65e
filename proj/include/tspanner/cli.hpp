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

// Command-line front end. run_cli() is the whole program; the executable in
// tools/ only forwards argv to it, so tests drive it in-process.
//
// Exit codes:
//   0  success
//   1  usage or I/O error; verify found violations
//   2  malformed or invalid diagram, malformed tree, vertex-count mismatch
//   3  disconnected graph
//   4  tree does not span the graph
//   5  instance too large for the exhaustive oracle
//   6  generator could not draw a connected instance

#ifndef TSPANNER_CLI_HPP_
#define TSPANNER_CLI_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tspanner/bfs_tree.hpp"
#include "tspanner/diagram.hpp"
#include "tspanner/generate.hpp"
#include "tspanner/graph.hpp"
#include "tspanner/spanner.hpp"
#include "tspanner/tree.hpp"
#include "tspanner/verify.hpp"

namespace tspanner {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kDisconnected = 3;
inline constexpr int kNotSpanning = 4;
inline constexpr int kTooLarge = 5;
inline constexpr int kGeneration = 6;
}  // namespace exit_code

struct RunConfig {
  std::string command;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string mode = "general";
  std::string input;
  std::string tree;
  std::string output;
  std::size_t threshold = 3;
  std::string trace;
  std::vector<std::size_t> sizes;
};

// Per size: medians over kBenchRepeats instances; max_stretch is the worst.
struct BenchRow {
  std::size_t n = 0;
  std::size_t edges = 0;
  double generate_ms = 0;
  double build_ms = 0;
  double verify_ms = 0;
  std::size_t max_stretch = 0;
};

inline constexpr int kBenchRepeats = 3;

// Each repeat draws a fresh general-mode instance from the schedule
// Rng(seed), so the median smooths both scheduler noise and the shape of
// any one instance (BFS height and level sizes move phase costs by tens
// of percent at fixed n). The build skips lemma audits. O(n^2) per phase.
inline std::vector<BenchRow> run_bench(const std::vector<std::size_t>& sizes,
                                       std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  const auto ms = [](Clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  Rng schedule(seed);
  std::vector<BenchRow> rows;
  BuildOptions options;
  options.audit_lemmas = false;
  for (std::size_t n : sizes) {
    std::vector<double> gen, build, check, edges;
    BenchRow row;
    row.n = n;
    for (int rep = 0; rep < kBenchRepeats; ++rep) {
      const std::uint64_t instance_seed = schedule.next();
      auto t0 = Clock::now();
      const Diagram d = generate_random(n, instance_seed, Mode::kGeneral);
      auto t1 = Clock::now();
      const SpannerResult r = build_tree3spanner(d, options);
      auto t2 = Clock::now();
      const StretchReport report = max_edge_stretch(r.graph, r.tree.parent, 3);
      auto t3 = Clock::now();
      gen.push_back(ms(t1 - t0));
      build.push_back(ms(t2 - t1));
      check.push_back(ms(t3 - t2));
      edges.push_back(double(r.graph.edge_count()));
      row.max_stretch = std::max(row.max_stretch, report.max_edge_stretch);
    }
    row.edges = static_cast<std::size_t>(median(edges));
    row.generate_ms = median(gen);
    row.build_ms = median(build);
    row.verify_ms = median(check);
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(exit_code::kFailure, "cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Writes to `path`, or to `out` when path is empty or "-".
inline void write_output(const std::string& path, const std::string& text,
                         std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) throw CliError(exit_code::kFailure, "cannot write " + path);
}

inline Diagram load_diagram(const std::string& path) {
  if (path.empty()) throw CliError(exit_code::kFailure, "--input is required");
  const std::string text = read_file(path);
  try {
    return parse_diagram(text);
  } catch (const ParseError& e) {
    throw CliError(exit_code::kBadInput, path + ": " + e.what());
  }
}

inline CanonicalForm load_canonical(const std::string& path) {
  const Diagram d = load_diagram(path);
  try {
    return canonicalize(d);
  } catch (const InvalidDiagram& e) {
    throw CliError(exit_code::kBadInput, path + ": " + e.what());
  }
}

inline ParentArray load_tree(const std::string& path, std::size_t n) {
  if (path.empty()) throw CliError(exit_code::kFailure, "--tree is required");
  ParentArray tree;
  try {
    tree = parse_tree(read_file(path));
  } catch (const ParseError& e) {
    throw CliError(exit_code::kBadInput, path + ": " + e.what());
  }
  if (tree.size() != n) {
    throw CliError(exit_code::kBadInput,
                   "tree has " + std::to_string(tree.size()) +
                       " vertices, diagram has " + std::to_string(n));
  }
  return tree;
}

inline int cmd_gen(const RunConfig& config, std::ostream& out) {
  try {
    const Diagram d =
        generate_random(config.n, config.seed, parse_mode(config.mode));
    write_output(config.output, serialize(d), out);
  } catch (const GenerationError& e) {
    throw CliError(exit_code::kGeneration, e.what());
  }
  return exit_code::kOk;
}

inline int cmd_build(const RunConfig& config, std::ostream& out) {
  const Diagram d = load_diagram(config.input);
  SpannerResult result;
  try {
    result = build_tree3spanner(d);
  } catch (const InvalidDiagram& e) {
    throw CliError(exit_code::kBadInput, config.input + ": " + e.what());
  } catch (const DisconnectedGraph& e) {
    throw CliError(exit_code::kDisconnected, e.what());
  }
  write_output(config.output, serialize_tree(result.tree.parent), out);
  if (!config.trace.empty()) {
    write_output(config.trace, result.trace.to_text(), out);
  }
  return exit_code::kOk;
}

inline int cmd_verify(const RunConfig& config, std::ostream& out) {
  const CanonicalForm canon = load_canonical(config.input);
  const IntersectionGraph g = build_graph(canon.diagram);
  const ParentArray tree = load_tree(config.tree, g.size());
  const TreeCheck check = check_spanning_tree(g, tree);
  if (!check.ok) throw CliError(exit_code::kNotSpanning, check.reason);
  const StretchReport report = max_edge_stretch(g, tree, config.threshold);
  out << report.to_text() << '\n';
  return report.ok() ? exit_code::kOk : exit_code::kFailure;
}

inline int cmd_oracle(const RunConfig& config, std::ostream& out) {
  const CanonicalForm canon = load_canonical(config.input);
  const IntersectionGraph g = build_graph(canon.diagram);
  try {
    out << exhaustive_best_tree_stretch(g) << '\n';
  } catch (const InstanceTooLarge& e) {
    throw CliError(exit_code::kTooLarge, e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(exit_code::kDisconnected, e.what());
  }
  return exit_code::kOk;
}

inline std::string to_dot(const IntersectionGraph& g,
                          const ParentArray* tree) {
  std::ostringstream dot;
  dot << "graph G {\n";
  for (Vertex v = 0; v < g.size(); ++v) dot << "  " << v + 1 << ";\n";
  for (auto [u, v] : g.edges()) {
    const bool bold =
        tree && ((*tree)[u] == v || (*tree)[v] == u);
    dot << "  " << u + 1 << " -- " << v + 1 << (bold ? " [style=bold]" : "")
        << ";\n";
  }
  dot << "}\n";
  return dot.str();
}

inline int cmd_dot(const RunConfig& config, std::ostream& out) {
  const CanonicalForm canon = load_canonical(config.input);
  const IntersectionGraph g = build_graph(canon.diagram);
  std::optional<ParentArray> tree;
  if (!config.tree.empty()) {
    tree = load_tree(config.tree, g.size());
    const TreeCheck check = check_spanning_tree(g, *tree);
    if (!check.ok) throw CliError(exit_code::kNotSpanning, check.reason);
  }
  write_output(config.output, to_dot(g, tree ? &*tree : nullptr), out);
  return exit_code::kOk;
}

inline std::string format_bench(const std::vector<BenchRow>& rows) {
  std::ostringstream table;
  table << "n edges gen_ms build_ms verify_ms build_ratio max_stretch\n";
  table << std::fixed << std::setprecision(3);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const BenchRow& r = rows[k];
    table << r.n << ' ' << r.edges << ' ' << r.generate_ms << ' '
          << r.build_ms << ' ' << r.verify_ms << ' ';
    if (k == 0 || rows[k - 1].build_ms <= 0) {
      table << '-';
    } else {
      table << r.build_ms / rows[k - 1].build_ms;
    }
    table << ' ' << r.max_stretch << '\n';
  }
  return table.str();
}

inline int cmd_bench(const RunConfig& config, std::ostream& out) {
  if (!std::is_sorted(config.sizes.begin(), config.sizes.end())) {
    throw CliError(exit_code::kFailure, "--sizes must be ascending");
  }
  write_output(config.output, format_bench(run_bench(config.sizes, config.seed)),
               out);
  return exit_code::kOk;
}

// Rejects counts of zero; the option's type rejects everything else.
inline CLI::Validator at_least_one() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        return value.find_first_not_of('0') == std::string::npos
                   ? "must be at least 1"
                   : "";
      },
      "N>=1");
}

}  // namespace detail

// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  RunConfig config;
  CLI::App app{"Tree 3-spanners of trapezoid graphs", "tspanner"};
  app.require_subcommand(1);
  const auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("-i,--input", config.input, "diagram file")->required();
  };
  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", config.output,
                    "output file (default: standard output)");
  };

  CLI::App* gen = app.add_subcommand("gen", "draw a random connected diagram");
  gen->add_option("--n", config.n, "number of trapezoids")
      ->required()
      ->check(detail::at_least_one());
  gen->add_option("--seed", config.seed, "generator seed");
  gen->add_option("--mode", config.mode, "general, interval or permutation")
      ->check(CLI::IsMember({"general", "interval", "permutation"}));
  add_output(gen);

  CLI::App* build = app.add_subcommand("build", "build the spanning tree");
  add_input(build);
  add_output(build);
  build->add_option("--trace", config.trace, "write the construction trace");

  CLI::App* verify = app.add_subcommand("verify", "report edge stretch");
  add_input(verify);
  verify->add_option("-t,--tree", config.tree, "tree file")->required();
  verify->add_option("--threshold", config.threshold, "stretch bound");

  CLI::App* oracle =
      app.add_subcommand("oracle", "best stretch over all spanning trees");
  add_input(oracle);

  CLI::App* dot = app.add_subcommand("dot", "export the graph as DOT");
  add_input(dot);
  dot->add_option("-t,--tree", config.tree, "tree file; its edges are bold");
  add_output(dot);

  CLI::App* bench = app.add_subcommand("bench", "time each phase");
  bench->add_option("--sizes", config.sizes, "ascending instance sizes")
      ->required()
      ->delimiter(',')
      ->check(detail::at_least_one());
  bench->add_option("--seed", config.seed, "schedule seed");
  add_output(bench);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_code::kOk;
    }
    err << "error: " << e.what() << '\n';
    return exit_code::kFailure;
  }

  try {
    if (*gen) return detail::cmd_gen(config, out);
    if (*build) return detail::cmd_build(config, out);
    if (*verify) return detail::cmd_verify(config, out);
    if (*oracle) return detail::cmd_oracle(config, out);
    if (*dot) return detail::cmd_dot(config, out);
    if (*bench) return detail::cmd_bench(config, out);
  } catch (const detail::CliError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  }
  return exit_code::kFailure;
}

}  // namespace tspanner

#endif  // TSPANNER_CLI_HPP_
