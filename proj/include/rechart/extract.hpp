#pragma once

#include <optional>
#include <vector>

#include "rechart/chart.hpp"
#include "rechart/lee.hpp"
#include "rechart/regexp.hpp"

namespace rechart {

/// The star body introduced for one elimination step: the sum of
/// a.B(target) over the step's entry transitions. Always action-guarded,
/// so it never has the empty word property.
struct LoopSummary {
  std::string vertex;
  int level;
  ExprPtr body_sum;
};

/// Witness-guided extraction of a regular expression whose chart is
/// bisimilar to g. Requires g garbage-collected and the levels to pass
/// check_witness (std::invalid_argument otherwise).
ExprPtr extract(const Chart& g, const LevelMap& witness_levels);
ExprPtr extract(const Chart& g, const LevelMap& witness_levels,
                std::vector<LoopSummary>& summaries_out);

struct RoundtripReport {
  ExprPtr input;
  Chart collapsed;
  ExprPtr extracted;  // null when the collapse unexpectedly fails LEE
  bool bisim_ok = false;
  bool extracted_one_return_less = false;
};

/// Pipeline check for a 1-return-less expression e: collapse chart_of(e),
/// decide LEE, extract e', and report whether chart_of(e') is bisimilar
/// to the collapse and e' is 1-return-less again. Requires
/// one_return_less(e); propagates lee_decide resource errors.
RoundtripReport roundtrip(const ExprPtr& e, const LeeOptions& opts = {});

}  // namespace rechart
