#pragma once

#include <set>
#include <string>
#include <vector>

#include "rechart/chart.hpp"
#include "rechart/regexp.hpp"

namespace rechart {

/// A provable transition fact: source -label-> target.
struct StepFact {
  ExprPtr source;
  std::string label;
  ExprPtr target;
};

/// Termination predicate: 1 iff the termination judgment is derivable.
/// tm(1) = tm(e*) = 1, tm(0) = tm(a) = 0, tm(e+f) = max, tm(e.f) = min.
int tm(const ExprPtr& e);

/// Empty word property: the denoted language contains the empty word,
/// equivalently tm(e) = 1.
bool ewp(const ExprPtr& e);

/// Antimirov partial derivatives of e along `letter`, without any
/// simplification of the results. Sorted, duplicate-free.
std::vector<ExprPtr> deriv(const std::string& letter, const ExprPtr& e);

/// All derivable steps from e, enumerated by backward proof search over
/// the transition rules (premises live on strict subterms, so the search
/// is bounded). Kept independent of deriv, which it cross-checks.
std::vector<StepFact> steps_by_rules(const ExprPtr& e);

/// Proof search for the termination judgment; the oracle for tm.
bool termination_by_rules(const ExprPtr& e);

/// Action letters occurring in e, sorted.
std::set<std::string> alphabet_of(const ExprPtr& e);

struct ChartOfOptions {
  std::size_t max_states = 100000;
};

/// The chart of e: vertices are the syntactically distinct expressions
/// reachable from e under deriv (identified by their printed form),
/// start is e, and termination follows tm. Throws ResourceError if the
/// state cap is exceeded (unreachable for well-formed inputs).
Chart chart_of(const ExprPtr& e, const ChartOfOptions& opts = {});

/// True iff for no star subexpression f* of e the chart of f reaches a
/// state that can terminate immediately and can also do a proper step
/// and terminate later. The initial state f itself counts as reached.
bool one_return_less(const ExprPtr& e);

}  // namespace rechart
