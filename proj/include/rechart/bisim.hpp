#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rechart/chart.hpp"

namespace rechart {

/// Result of a bisimilarity check between two charts.
///
/// When related, `relation` lists all cross pairs (g vertex, h vertex)
/// of bisimilar states; it is itself a bisimulation and contains the
/// pair of start vertices. When not related, `trail` holds a game trace
/// from the start pair to a mismatch: each step is an exchange the
/// defender could still answer, and `mismatch` describes the final
/// unanswerable difference.
struct BisimResult {
  bool related = false;
  std::vector<std::pair<std::string, std::string>> relation;

  struct TrailStep {
    bool left_moved;  // which side the attacker moved on
    std::string label;
    std::string left_from, right_from;
    std::string left_to, right_to;
  };
  std::vector<TrailStep> trail;
  std::string mismatch;
};

struct CollapseResult {
  Chart quotient;
  std::map<std::string, std::string> mapping;  // vertex -> quotient class
};

/// Decides strong bisimilarity of the two start vertices on the disjoint
/// union, with termination as an observable that splits the initial
/// partition.
BisimResult bisimilar(const Chart& g, const Chart& h);

/// Quotient of g by the coarsest bisimulation. Class ids are the
/// lexicographically least member vertex; the mapping is a functional
/// bisimulation onto the quotient, which has no two distinct bisimilar
/// vertices.
CollapseResult collapse(const Chart& g);

/// Checks that f is a functional bisimulation from g onto h: maps start
/// to start, preserves and reflects termination, and satisfies the forth
/// and back transfer conditions per action label.
bool is_functional_bisim(const std::map<std::string, std::string>& f,
                         const Chart& g, const Chart& h);

/// Canonical renaming of vertices to "0", "1", ... by refinement colors,
/// falling back to breadth-first discovery order with lexicographic
/// (label, color) tie-breaking when colors do not separate all vertices.
/// Exact on collapsed charts; heuristic otherwise.
Chart canonical_form(const Chart& c);

bool isomorphic(const Chart& a, const Chart& b);

}  // namespace rechart
