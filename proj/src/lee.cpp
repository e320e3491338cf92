#include "rechart/lee.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <stdexcept>

#include "rechart/errors.hpp"

namespace rechart {

namespace {

// Split view of a chart at its start vertex v: a source node keeping v's
// outgoing edges and a sink node receiving v's incoming edges. Nodes are
// the remaining vertex ids plus the two reserved indices.
struct Split {
  static constexpr int source = 0;
  static constexpr int sink = 1;
  std::vector<std::string> inner_ids;                 // index - 2 -> vertex id
  std::map<std::string, int> index;                   // inner vertex id -> node
  std::vector<std::vector<std::pair<std::string, int>>> out;  // node -> (label, node)
};

Split split_at_start(const Chart& c) {
  Split s;
  for (const auto& v : c.vertices()) {
    if (v == c.start()) continue;
    s.index[v] = static_cast<int>(s.inner_ids.size()) + 2;
    s.inner_ids.push_back(v);
  }
  s.out.resize(s.inner_ids.size() + 2);
  for (const auto& t : c.transitions()) {
    int from = t.from == c.start() ? Split::source : s.index.at(t.from);
    int to = t.to == c.start() ? Split::sink : s.index.at(t.to);
    s.out[from].emplace_back(t.label, to);
  }
  for (auto& edges : s.out) std::sort(edges.begin(), edges.end());
  return s;
}

bool split_is_acyclic(const Split& s) {
  int n = static_cast<int>(s.out.size());
  std::vector<int> indegree(n, 0);
  for (const auto& edges : s.out)
    for (const auto& [label, to] : edges) ++indegree[to];
  std::deque<int> queue;
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) queue.push_back(i);
  int removed = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    ++removed;
    for (const auto& [label, to] : s.out[u])
      if (--indegree[to] == 0) queue.push_back(to);
  }
  return removed == n;
}

}  // namespace

bool is_loop(const Chart& c) {
  const std::string& v = c.start();
  if (c.out(v).empty()) return false;  // L1: at least one outgoing transition
  for (const auto& t : c.terminating())
    if (t != v) return false;  // L3: termination only at the start

  // L2: the split graph is acyclic and every maximal path from the
  // source ends at the sink
  Split s = split_at_start(c);
  if (!split_is_acyclic(s)) return false;
  std::vector<char> reached(s.out.size(), 0);
  std::deque<int> queue{Split::source};
  reached[Split::source] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (s.out[u].empty() && u != Split::sink) return false;  // dead end off the sink
    for (const auto& [label, to] : s.out[u])
      if (!reached[to]) {
        reached[to] = 1;
        queue.push_back(to);
      }
  }
  return true;
}

std::optional<Chart> loop_subchart(const Chart& g, const std::string& v,
                                   const std::set<Transition>& entries) {
  if (entries.empty()) throw std::invalid_argument("entry set must be nonempty");
  for (const auto& t : entries) {
    if (t.from != v)
      throw std::invalid_argument("entry " + t.from + " -" + t.label + "-> " + t.to +
                                  " is not sourced at '" + v + "'");
    if (!g.transitions().count(t))
      throw std::invalid_argument("entry " + t.from + " -" + t.label + "-> " + t.to +
                                  " is not a transition of the chart");
  }

  std::set<std::string> vertices{v};
  std::set<Transition> transitions(entries.begin(), entries.end());
  std::deque<std::string> queue;
  for (const auto& t : entries)
    if (t.to != v && vertices.insert(t.to).second) queue.push_back(t.to);
  while (!queue.empty()) {
    std::string w = queue.front();
    queue.pop_front();
    for (const auto& t : g.out(w)) {  // exploration stops upon re-reaching v
      transitions.insert(t);
      if (t.to != v && vertices.insert(t.to).second) queue.push_back(t.to);
    }
  }
  std::set<std::string> terminating;
  for (const auto& w : vertices)
    if (g.terminates(w)) terminating.insert(w);
  Chart sub(std::move(vertices), v, std::move(terminating), std::move(transitions));
  if (!is_loop(sub)) return std::nullopt;
  return sub;
}

Chart eliminate_step(const Chart& g, const std::string& v,
                     const std::set<Transition>& entries) {
  if (!loop_subchart(g, v, entries))
    throw std::invalid_argument("entries at '" + v + "' do not generate a loop sub-chart");
  std::set<Transition> remaining;
  for (const auto& t : g.transitions())
    if (!entries.count(t)) remaining.insert(t);
  return gc(Chart(g.vertices(), g.start(), g.terminating(), std::move(remaining)));
}

namespace {

// All transitions of `c` sourced at some vertex whose singleton entry
// set generates a loop sub-chart. A set of entries at v generates a loop
// exactly when each of its singletons does, so these are the building
// blocks of every legal elimination step.
std::map<std::string, std::set<Transition>> loop_entries(const Chart& c) {
  std::map<std::string, std::set<Transition>> result;
  for (const auto& v : c.vertices())
    for (const auto& t : c.out(v))
      if (loop_subchart(c, v, {t})) result[v].insert(t);
  return result;
}

std::string chart_key(const Chart& c) {
  std::string key = c.start();
  key += '\n';
  for (const auto& v : c.vertices()) {
    key += v;
    key += c.terminates(v) ? "!\n" : "\n";
  }
  for (const auto& t : c.transitions()) {
    key += t.from;
    key += ' ';
    key += t.label;
    key += ' ';
    key += t.to;
    key += '\n';
  }
  return key;
}

struct Backtracker {
  const LeeOptions& opts;
  std::size_t nodes = 0;
  std::set<std::string> dead;

  std::optional<EliminationTrace> search(const Chart& c) {
    if (!has_infinite_trace(c)) return EliminationTrace{};
    std::string key = chart_key(c);
    if (dead.count(key)) return std::nullopt;

    for (const auto& [v, entries] : loop_entries(c)) {
      if (entries.size() > opts.max_entry_fanout)
        throw ResourceError("entry fanout at '" + v + "' exceeds " +
                            std::to_string(opts.max_entry_fanout));
      std::vector<Transition> pool(entries.begin(), entries.end());
      std::size_t count = std::size_t{1} << pool.size();
      // larger entry sets first
      std::vector<std::size_t> masks;
      for (std::size_t m = 1; m < count; ++m) masks.push_back(m);
      std::sort(masks.begin(), masks.end(), [](std::size_t a, std::size_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa > pb : a < b;
      });
      for (std::size_t mask : masks) {
        if (++nodes > opts.search_budget)
          throw ResourceError("loop-elimination search exceeded " +
                              std::to_string(opts.search_budget) + " nodes");
        std::set<Transition> subset;
        for (std::size_t i = 0; i < pool.size(); ++i)
          if (mask & (std::size_t{1} << i)) subset.insert(pool[i]);
        auto rest = search(eliminate_step(c, v, subset));
        if (rest) {
          rest->insert(rest->begin(), EliminationStep{v, std::move(subset)});
          return rest;
        }
      }
    }
    dead.insert(std::move(key));
    return std::nullopt;
  }
};

}  // namespace

std::optional<EliminationTrace> lee_decide_greedy(const Chart& g) {
  Chart current = gc(g);
  EliminationTrace trace;
  while (has_infinite_trace(current)) {
    // smallest singleton-generated loop first; ties by (v, transition)
    std::optional<std::tuple<std::size_t, std::size_t, std::string, Transition>> best;
    for (const auto& v : current.vertices()) {
      for (const auto& t : current.out(v)) {
        auto sub = loop_subchart(current, v, {t});
        if (!sub) continue;
        std::tuple<std::size_t, std::size_t, std::string, Transition> key{
            sub->transitions().size(), sub->vertices().size(), v, t};
        if (!best || key < *best) best = key;
      }
    }
    if (!best) return std::nullopt;  // stalled on a cyclic chart
    const auto& [edges, verts, v, t] = *best;
    trace.push_back({v, {t}});
    current = eliminate_step(current, v, {t});
  }
  return trace;
}

std::optional<EliminationTrace> lee_decide_backtracking(const Chart& g, const LeeOptions& opts) {
  Backtracker bt{opts, 0, {}};
  return bt.search(gc(g));
}

std::optional<EliminationTrace> lee_decide(const Chart& g, const LeeOptions& opts) {
  if (auto trace = lee_decide_greedy(g)) return trace;
  return lee_decide_backtracking(g, opts);
}

Witness witness_of(const Chart& g, const EliminationTrace& trace) {
  Chart current = g;
  LevelMap levels;
  int level = 0;
  for (const auto& step : trace) {
    ++level;
    for (const auto& t : step.entries) {
      if (!current.transitions().count(t))
        throw std::invalid_argument("trace step " + std::to_string(level) +
                                    " names a transition that is no longer present");
      levels[t] = level;
    }
    if (!loop_subchart(current, step.vertex, step.entries))
      throw std::invalid_argument("trace step " + std::to_string(level) +
                                  " does not generate a loop sub-chart");
    current = eliminate_step(current, step.vertex, step.entries);
  }
  if (has_infinite_trace(current))
    throw std::invalid_argument("trace replay does not end in a chart without infinite traces");
  return Witness{g, std::move(levels)};
}

bool check_witness(const Witness& w) {
  for (const auto& [t, level] : w.levels)
    if (level < 1 || !w.chart.transitions().count(t)) return false;

  std::set<int> level_values;
  for (const auto& [t, level] : w.levels) level_values.insert(level);

  Chart current = gc(w.chart);
  for (int level : level_values) {
    std::set<Transition> present;  // entries of this level still in the chart
    for (const auto& [t, l] : w.levels)
      if (l == level && current.transitions().count(t)) present.insert(t);
    if (present.empty()) continue;  // fully removed by earlier garbage collection
    const std::string& source = present.begin()->from;
    for (const auto& t : present)
      if (t.from != source) return false;
    if (!loop_subchart(current, source, present)) return false;
    current = eliminate_step(current, source, present);
  }
  return !has_infinite_trace(current);
}

}  // namespace rechart
