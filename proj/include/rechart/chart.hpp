#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rechart {

struct Transition {
  std::string from;
  std::string label;
  std::string to;

  auto operator<=>(const Transition&) const = default;
};

/// Entry-level decoration of transitions, recording a loop-elimination
/// order (level k = removed in the k-th step).
using LevelMap = std::map<Transition, int>;

/// Finite rooted labeled transition graph with a termination predicate.
///
/// Vertices are opaque strings; parallel transitions with identical
/// (from, label, to) collapse to one. Charts are immutable after
/// construction and all operations return new values, so concurrent
/// reads need no coordination.
class Chart {
public:
  /// Throws std::invalid_argument unless start and all transition
  /// endpoints and terminating vertices are members of `vertices`.
  Chart(std::set<std::string> vertices, std::string start,
        std::set<std::string> terminating, std::set<Transition> transitions);

  const std::set<std::string>& vertices() const noexcept { return vertices_; }
  const std::string& start() const noexcept { return start_; }
  const std::set<std::string>& terminating() const noexcept { return terminating_; }
  const std::set<Transition>& transitions() const noexcept { return transitions_; }

  bool has_vertex(const std::string& v) const { return vertices_.count(v) > 0; }
  bool terminates(const std::string& v) const { return terminating_.count(v) > 0; }

  /// Outgoing transitions of `v`, sorted by (label, to).
  std::vector<Transition> out(const std::string& v) const;

  /// All action labels occurring on transitions, sorted.
  std::set<std::string> labels() const;

  bool operator==(const Chart&) const = default;

private:
  std::set<std::string> vertices_;
  std::string start_;
  std::set<std::string> terminating_;
  std::set<Transition> transitions_;
};

/// Restriction of `c` to the vertices reachable from the start vertex.
/// Idempotent; never removes the start vertex.
Chart gc(const Chart& c);

/// True iff a cycle is reachable from the start vertex (on a finite
/// chart this is exactly the existence of an infinite trace).
bool has_infinite_trace(const Chart& c);

std::string to_json(const Chart& c);
std::string to_json(const Chart& c, const LevelMap& witness);

/// Parses a chart document. Rejects dangling vertex references,
/// duplicate vertex ids, a missing or unknown start vertex, labels that
/// are not action names, and witness entries that do not name a
/// transition of the chart. Throws FormatError.
Chart from_json(const std::string& text);

struct ChartDoc {
  Chart chart;
  LevelMap witness;  // empty when the document has no witness array
};

ChartDoc chart_doc_from_json(const std::string& text);

/// DOT rendering: start arrow, double circle for terminating vertices,
/// and bracketed entry levels ("a [2]") for decorated transitions.
std::string to_dot(const Chart& c, const LevelMap& decorations = {});

}  // namespace rechart
