#include "rechart/extract.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "rechart/bisim.hpp"
#include "rechart/semantics.hpp"

namespace rechart {

namespace {

// left-folded sum: x1 + x2 + x3 renders without parentheses
ExprPtr fold_sum(const std::vector<ExprPtr>& summands) {
  ExprPtr acc = summands.front();
  for (std::size_t i = 1; i < summands.size(); ++i) acc = sum(acc, summands[i]);
  return acc;
}

// reverse topological order of an acyclic edge relation on string nodes
std::vector<std::string> reverse_topo(const std::set<std::string>& nodes,
                                      const std::multimap<std::string, std::string>& edges) {
  std::map<std::string, int> outdeg;
  std::multimap<std::string, std::string> incoming;  // to -> from
  for (const auto& n : nodes) outdeg[n] = 0;
  for (const auto& [from, to] : edges) {
    ++outdeg[from];
    incoming.emplace(to, from);
  }
  std::vector<std::string> order;
  std::vector<std::string> ready;
  for (const auto& [n, d] : outdeg)
    if (d == 0) ready.push_back(n);
  while (!ready.empty()) {
    std::string n = ready.back();
    ready.pop_back();
    order.push_back(n);
    auto [lo, hi] = incoming.equal_range(n);
    for (auto it = lo; it != hi; ++it)
      if (--outdeg[it->second] == 0) ready.push_back(it->second);
  }
  if (order.size() != nodes.size())
    throw std::logic_error("split body is cyclic; the witness was not valid");
  return order;
}

}  // namespace

ExprPtr extract(const Chart& g, const LevelMap& witness_levels,
                std::vector<LoopSummary>& summaries_out) {
  if (!(gc(g) == g)) throw std::invalid_argument("chart must be garbage-collected");
  if (!check_witness(Witness{g, witness_levels}))
    throw std::invalid_argument("levels are not a valid witness for the chart");

  Chart current = g;
  std::map<std::string, std::vector<ExprPtr>> loop_bodies;  // vertex -> accumulated body sums

  // Accumulated loop summaries at one vertex combine as a single star of
  // their sum; behavior at a vertex is then prefix(u).(continuation).
  auto prefixed = [&](const std::string& u, const ExprPtr& continuation) {
    auto it = loop_bodies.find(u);
    if (it == loop_bodies.end() || it->second.empty()) return continuation;
    return prod(star(fold_sum(it->second)), continuation);
  };

  std::set<int> level_values;
  for (const auto& [t, level] : witness_levels) level_values.insert(level);

  for (int level : level_values) {
    std::set<Transition> entries;
    for (const auto& [t, l] : witness_levels)
      if (l == level && current.transitions().count(t)) entries.insert(t);
    if (entries.empty()) continue;
    const std::string v = entries.begin()->from;
    Chart sub = *loop_subchart(current, v, entries);

    // value the split body bottom-up: B(sink) = 1, and for inner vertices
    // B(u) = prefix(u) . sum of a.B(w) over u's outgoing transitions
    std::string source = "\x01source";
    while (sub.has_vertex(source)) source += '_';
    std::string sink = "\x01sink";
    while (sub.has_vertex(sink)) sink += '_';
    std::set<std::string> nodes{source, sink};
    for (const auto& w : sub.vertices())
      if (w != v) nodes.insert(w);
    std::multimap<std::string, std::string> edges;
    std::multimap<std::string, Transition> labeled;  // node -> original transition
    for (const auto& t : sub.transitions()) {
      std::string from = t.from == v ? source : t.from;
      std::string to = t.to == v ? sink : t.to;
      edges.emplace(from, to);
      labeled.emplace(from, t);
    }

    std::map<std::string, ExprPtr> value;
    value[sink] = one();
    for (const auto& node : reverse_topo(nodes, edges)) {
      if (node == sink) continue;
      auto [lo, hi] = labeled.equal_range(node);
      std::vector<Transition> outs;
      for (auto it = lo; it != hi; ++it) outs.push_back(it->second);
      std::sort(outs.begin(), outs.end(),
                [](const Transition& a, const Transition& b) {
                  return std::tie(a.label, a.to) < std::tie(b.label, b.to);
                });
      std::vector<ExprPtr> summands;
      for (const auto& t : outs)
        summands.push_back(prod(act(t.label), value.at(t.to == v ? sink : t.to)));
      ExprPtr raw = fold_sum(summands);  // loops have no dead ends, so nonempty
      value[node] = node == source ? raw : prefixed(node, raw);
    }

    ExprPtr body = value.at(source);
    summaries_out.push_back({v, level, body});
    loop_bodies[v].push_back(body);
    current = eliminate_step(current, v, entries);
  }

  // residual acyclic phase
  if (has_infinite_trace(current))
    throw std::logic_error("residual chart still has an infinite trace");
  std::multimap<std::string, std::string> edges;
  for (const auto& t : current.transitions()) edges.emplace(t.from, t.to);
  std::map<std::string, ExprPtr> value;
  for (const auto& u : reverse_topo(current.vertices(), edges)) {
    std::vector<ExprPtr> summands;
    for (const auto& t : current.out(u)) summands.push_back(prod(act(t.label), value.at(t.to)));
    if (current.terminates(u)) summands.push_back(one());
    ExprPtr inner = summands.empty() ? zero() : fold_sum(summands);
    value[u] = prefixed(u, inner);
  }
  return value.at(current.start());
}

ExprPtr extract(const Chart& g, const LevelMap& witness_levels) {
  std::vector<LoopSummary> summaries;
  return extract(g, witness_levels, summaries);
}

RoundtripReport roundtrip(const ExprPtr& e, const LeeOptions& opts) {
  if (!one_return_less(e))
    throw std::invalid_argument("expression is not 1-return-less: " + to_string(e));
  CollapseResult col = collapse(chart_of(e));
  auto trace = lee_decide(col.quotient, opts);
  if (!trace) return RoundtripReport{e, std::move(col.quotient), nullptr, false, false};
  Witness w = witness_of(col.quotient, *trace);
  ExprPtr extracted = extract(col.quotient, w.levels);
  bool related = bisimilar(chart_of(extracted), col.quotient).related;
  bool orl = one_return_less(extracted);
  return RoundtripReport{e, std::move(col.quotient), std::move(extracted), related, orl};
}

}  // namespace rechart
