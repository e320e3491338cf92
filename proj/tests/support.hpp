#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rechart/chart.hpp"
#include "rechart/gen.hpp"
#include "rechart/regexp.hpp"

namespace rechart::testing {

// The three process graphs used throughout: the 3-vertex collapse chart C
// and the two non-expressible charts N1 (both vertices terminating) and
// N2 (six cross transitions, no termination).
Chart fixture_c();
Chart fixture_n1();
Chart fixture_n2();

// Naive greatest-fixpoint bisimilarity: start from all termination-
// agreeing pairs of the disjoint union and delete pairs violating the
// transfer conditions until stable. Independent of the partition-
// refinement decider it cross-checks.
bool naive_bisimilar(const Chart& g, const Chart& h);

// Cycle detection by Kahn's algorithm over the reachable part;
// independent of the DFS used by has_infinite_trace.
bool kahn_has_reachable_cycle(const Chart& c);

// All expressions of size exactly n over the alphabet, and of size <= n.
std::vector<ExprPtr> enumerate_exprs(std::size_t n, const std::vector<std::string>& alphabet);
std::vector<ExprPtr> enumerate_exprs_upto(std::size_t n, const std::vector<std::string>& alphabet);

// Random chart on at most max_vertices vertices (labels a/b), garbage-
// collected. `term_per_mille` is the per-vertex termination probability.
Chart random_chart(Rng& rng, std::size_t max_vertices, unsigned term_per_mille = 250,
                   unsigned edge_per_mille = 180);

// Random expression weighted toward operators, so draws fill most of the
// size budget; the corpora use this to actually exercise stars and loops.
ExprPtr random_deep_expr(Rng& rng, std::size_t max_size,
                         const std::vector<std::string>& alphabet);

// Runs the CLI (path from the RECHART_CLI environment variable) and
// captures exit code and combined output. Nullopt when the variable is
// unset.
struct CliResult {
  int exit_code;
  std::string output;
};
std::optional<CliResult> run_cli(const std::string& args);

// Scratch directory for fixture files; created lazily, process-unique.
std::string scratch_dir();
std::string write_scratch_file(const std::string& name, const std::string& contents);

}  // namespace rechart::testing
