#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rechart/chart.hpp"

namespace rechart {

/// One loop-elimination step: the entry transitions removed at `vertex`.
struct EliminationStep {
  std::string vertex;
  std::set<Transition> entries;
};

/// A recorded sequence of elimination steps. Replaying the steps in
/// order on the source chart succeeds and ends in a chart without an
/// infinite trace.
using EliminationTrace = std::vector<EliminationStep>;

/// A chart together with entry levels on some of its transitions.
struct Witness {
  Chart chart;
  LevelMap levels;
};

/// A chart is a loop when the start vertex has at least one outgoing
/// transition, every path from the start returns to it (splitting the
/// start into a source and a sink yields an acyclic graph whose maximal
/// source paths all end at the sink), and termination is only permitted
/// at the start.
bool is_loop(const Chart& c);

/// The sub-chart generated from v by the entry set: departing via the
/// entries, following all outgoing transitions of intermediate vertices
/// until v is reached again. Returns it iff it is a loop. The entries
/// must be nonempty transitions of g sourced at v (std::invalid_argument
/// otherwise).
std::optional<Chart> loop_subchart(const Chart& g, const std::string& v,
                                   const std::set<Transition>& entries);

/// Drops the entry transitions and garbage-collects. The entries must
/// generate a loop sub-chart (std::invalid_argument otherwise).
Chart eliminate_step(const Chart& g, const std::string& v,
                     const std::set<Transition>& entries);

struct LeeOptions {
  std::size_t search_budget = 1000000;  // backtracking nodes
  std::size_t max_entry_fanout = 12;    // subset-enumeration cap per vertex
};

/// Decides the loop existence and elimination condition: returns an
/// elimination trace ending in a chart without an infinite trace, or
/// nullopt when none exists. Greedy phase first (smallest loop
/// sub-chart, deterministic tie-breaking), then a complete backtracking
/// search. Throws ResourceError when the backtracking budget or the
/// entry-fanout cap is exceeded.
std::optional<EliminationTrace> lee_decide(const Chart& g, const LeeOptions& opts = {});

/// Greedy phase only; nullopt when it stalls before reaching an acyclic
/// chart. Exposed for the greedy-vs-complete agreement checks.
std::optional<EliminationTrace> lee_decide_greedy(const Chart& g);

/// Complete backtracking search only.
std::optional<EliminationTrace> lee_decide_backtracking(const Chart& g,
                                                        const LeeOptions& opts = {});

/// Levels each entry transition of step k with k. Throws
/// std::invalid_argument if the trace does not replay on g.
Witness witness_of(const Chart& g, const EliminationTrace& trace);

/// Replays the levels in ascending numeric order: the still-present
/// transitions of each level must share one source vertex and generate a
/// loop sub-chart in the current chart, and are then removed followed by
/// garbage collection; levels emptied by earlier collection are skipped.
/// True iff the replay succeeds and ends without an infinite trace.
bool check_witness(const Witness& w);

}  // namespace rechart
