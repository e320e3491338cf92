#include "rechart/bisim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

namespace rechart {

namespace {

// Indexed view of one chart or of a disjoint union of two.
struct Lts {
  std::vector<std::string> ids;            // index -> vertex id
  std::vector<char> side;                  // 0 = left chart, 1 = right chart
  std::vector<char> term;                  // termination flags
  std::vector<std::vector<std::pair<std::string, int>>> out;  // (label, target), sorted
  int start_left = 0;
  int start_right = 0;

  int size() const { return static_cast<int>(ids.size()); }
};

Lts index_union(const Chart& g, const Chart* h) {
  Lts lts;
  std::map<std::pair<char, std::string>, int> index;
  auto add_chart = [&](const Chart& c, char side) {
    for (const auto& v : c.vertices()) {
      index[{side, v}] = lts.size();
      lts.ids.push_back(v);
      lts.side.push_back(side);
      lts.term.push_back(c.terminates(v) ? 1 : 0);
    }
  };
  add_chart(g, 0);
  if (h) add_chart(*h, 1);
  lts.out.resize(lts.ids.size());
  auto add_edges = [&](const Chart& c, char side) {
    for (const auto& t : c.transitions())
      lts.out[index.at({side, t.from})].emplace_back(t.label, index.at({side, t.to}));
  };
  add_edges(g, 0);
  if (h) add_edges(*h, 1);
  for (auto& edges : lts.out) std::sort(edges.begin(), edges.end());
  lts.start_left = index.at({0, g.start()});
  lts.start_right = h ? index.at({1, h->start()}) : lts.start_left;
  return lts;
}

// Partition refinement by signatures: repeatedly split blocks until no
// state can be separated from its block by the label-indexed sets of
// successor blocks. Every round is recorded so refutations can be
// explained by the round at which two states were first separated.
using Partition = std::vector<int>;

std::vector<Partition> refine(const Lts& lts) {
  std::vector<Partition> rounds;
  Partition current(lts.size());
  for (int s = 0; s < lts.size(); ++s) current[s] = lts.term[s] ? 1 : 0;
  rounds.push_back(current);

  for (;;) {
    using Signature = std::pair<int, std::vector<std::pair<std::string, int>>>;
    std::map<Signature, int> block_of;
    Partition next(lts.size());
    for (int s = 0; s < lts.size(); ++s) {
      Signature sig;
      sig.first = current[s];
      for (const auto& [label, target] : lts.out[s]) sig.second.emplace_back(label, current[target]);
      std::sort(sig.second.begin(), sig.second.end());
      sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
      auto [it, inserted] = block_of.emplace(sig, static_cast<int>(block_of.size()));
      next[s] = it->second;
      (void)inserted;
    }
    if (next == current) break;
    current = next;
    rounds.push_back(current);
  }
  return rounds;
}

int separation_round(const std::vector<Partition>& rounds, int u, int v) {
  for (std::size_t r = 0; r < rounds.size(); ++r)
    if (rounds[r][u] != rounds[r][v]) return static_cast<int>(r);
  return -1;  // never separated: bisimilar
}

// Attacker strategy from the refinement history: at the round that first
// separated (u, v) there is a label and a previous-round block reachable
// from one side only; any defender reply lands in a pair separated one
// round earlier, so the recursion terminates.
void explain(const Lts& lts, const std::vector<Partition>& rounds, int u, int v,
             BisimResult& res) {
  int r = separation_round(rounds, u, v);
  if (r == 0) {
    res.mismatch = "termination differs: '" + lts.ids[u] + "' " +
                   (lts.term[u] ? "permits" : "forbids") + " immediate termination, '" +
                   lts.ids[v] + "' " + (lts.term[v] ? "permits" : "forbids") + " it";
    return;
  }
  const Partition& prev = rounds[r - 1];

  auto blocks_via = [&](int s, const std::string& label) {
    std::set<int> blocks;
    for (const auto& [a, t] : lts.out[s])
      if (a == label) blocks.insert(prev[t]);
    return blocks;
  };

  std::set<std::string> labels;
  for (const auto& [a, t] : lts.out[u]) labels.insert(a);
  for (const auto& [a, t] : lts.out[v]) labels.insert(a);

  for (const auto& label : labels) {
    auto bu = blocks_via(u, label);
    auto bv = blocks_via(v, label);
    bool left_attacks;
    std::optional<int> target_block;
    for (int b : bu)
      if (!bv.count(b)) {
        target_block = b;
        left_attacks = true;
        break;
      }
    if (!target_block)
      for (int b : bv)
        if (!bu.count(b)) {
          target_block = b;
          left_attacks = false;
          break;
        }
    if (!target_block) continue;

    int attacker = left_attacks ? u : v;
    int defender = left_attacks ? v : u;
    int attacker_to = -1;
    for (const auto& [a, t] : lts.out[attacker])
      if (a == label && prev[t] == *target_block) {
        attacker_to = t;
        break;
      }

    // defender replies: pick the one separated earliest from the attacker move
    int best_reply = -1, best_round = -1;
    for (const auto& [a, t] : lts.out[defender]) {
      if (a != label) continue;
      int rr = separation_round(rounds, attacker_to, t);
      if (best_reply < 0 || rr < best_round) {
        best_reply = t;
        best_round = rr;
      }
    }
    if (best_reply < 0) {
      res.mismatch = "'" + lts.ids[attacker] + "' offers action '" + label + "' but '" +
                     lts.ids[defender] + "' has no '" + label + "'-transition";
      return;
    }
    int next_u = left_attacks ? attacker_to : best_reply;
    int next_v = left_attacks ? best_reply : attacker_to;
    res.trail.push_back({left_attacks, label, lts.ids[u], lts.ids[v], lts.ids[next_u],
                         lts.ids[next_v]});
    explain(lts, rounds, next_u, next_v, res);
    return;
  }
  res.mismatch = "states '" + lts.ids[u] + "' and '" + lts.ids[v] +
                 "' are separated but no splitting label was found";  // unreachable
}

}  // namespace

BisimResult bisimilar(const Chart& g, const Chart& h) {
  Lts lts = index_union(g, &h);
  auto rounds = refine(lts);
  const Partition& final = rounds.back();

  BisimResult res;
  res.related = final[lts.start_left] == final[lts.start_right];
  if (res.related) {
    for (int x = 0; x < lts.size(); ++x) {
      if (lts.side[x] != 0) continue;
      for (int y = 0; y < lts.size(); ++y)
        if (lts.side[y] == 1 && final[x] == final[y])
          res.relation.emplace_back(lts.ids[x], lts.ids[y]);
    }
    std::sort(res.relation.begin(), res.relation.end());
  } else {
    explain(lts, rounds, lts.start_left, lts.start_right, res);
  }
  return res;
}

CollapseResult collapse(const Chart& g) {
  Chart reachable = gc(g);
  Lts lts = index_union(reachable, nullptr);
  const Partition final = refine(lts).back();

  // class id = lexicographically least member
  std::map<int, std::string> class_id;
  for (int s = 0; s < lts.size(); ++s) {
    auto it = class_id.find(final[s]);
    if (it == class_id.end() || lts.ids[s] < it->second) class_id[final[s]] = lts.ids[s];
  }

  std::map<std::string, std::string> mapping;
  std::set<std::string> vertices;
  std::set<std::string> terminating;
  for (int s = 0; s < lts.size(); ++s) {
    const std::string& cls = class_id.at(final[s]);
    mapping[lts.ids[s]] = cls;
    vertices.insert(cls);
    if (lts.term[s]) terminating.insert(cls);
  }
  std::set<Transition> transitions;
  for (const auto& t : reachable.transitions())
    transitions.insert({mapping.at(t.from), t.label, mapping.at(t.to)});

  Chart quotient = gc(Chart(std::move(vertices), mapping.at(reachable.start()),
                            std::move(terminating), std::move(transitions)));
  return CollapseResult{std::move(quotient), std::move(mapping)};
}

bool is_functional_bisim(const std::map<std::string, std::string>& f, const Chart& g,
                         const Chart& h) {
  for (const auto& v : g.vertices()) {
    auto it = f.find(v);
    if (it == f.end() || !h.has_vertex(it->second)) return false;  // not total into h
    if (g.terminates(v) != h.terminates(it->second)) return false;
  }
  if (f.at(g.start()) != h.start()) return false;
  // forth
  for (const auto& t : g.transitions())
    if (!h.transitions().count({f.at(t.from), t.label, f.at(t.to)})) return false;
  // back
  for (const auto& v : g.vertices()) {
    for (const auto& ht : h.out(f.at(v))) {
      bool matched = false;
      for (const auto& gt : g.out(v))
        if (gt.label == ht.label && f.at(gt.to) == ht.to) {
          matched = true;
          break;
        }
      if (!matched) return false;
    }
  }
  return true;
}

Chart canonical_form(const Chart& c) {
  Lts lts = index_union(c, nullptr);
  int n = lts.size();

  // color refinement with canonical renumbering: colors are ranks of
  // lexicographically sorted signatures, so they are intrinsic to the
  // isomorphism class
  std::vector<int> color(n);
  {
    std::map<std::pair<bool, bool>, int> seed;
    std::vector<std::pair<bool, bool>> keys(n);
    for (int s = 0; s < n; ++s) keys[s] = {s == lts.start_left, lts.term[s] != 0};
    for (const auto& k : std::set<std::pair<bool, bool>>(keys.begin(), keys.end()))
      seed.emplace(k, static_cast<int>(seed.size()));
    for (int s = 0; s < n; ++s) color[s] = seed.at(keys[s]);
  }
  for (;;) {
    using Key = std::pair<int, std::vector<std::pair<std::string, int>>>;
    std::vector<Key> keys(n);
    for (int s = 0; s < n; ++s) {
      keys[s].first = color[s];
      for (const auto& [label, t] : lts.out[s]) keys[s].second.emplace_back(label, color[t]);
      std::sort(keys[s].second.begin(), keys[s].second.end());
      keys[s].second.erase(std::unique(keys[s].second.begin(), keys[s].second.end()),
                           keys[s].second.end());
    }
    std::map<Key, int> rank;
    for (const auto& k : std::set<Key>(keys.begin(), keys.end()))
      rank.emplace(k, static_cast<int>(rank.size()));
    std::vector<int> next(n);
    for (int s = 0; s < n; ++s) next[s] = rank.at(keys[s]);
    if (next == color) break;
    color = std::move(next);
  }

  std::set<int> distinct(color.begin(), color.end());
  std::vector<int> order;  // canonical index -> state
  if (static_cast<int>(distinct.size()) == n) {
    order.resize(n);
    std::vector<std::pair<int, int>> by_color;
    for (int s = 0; s < n; ++s) by_color.emplace_back(color[s], s);
    std::sort(by_color.begin(), by_color.end());
    for (int i = 0; i < n; ++i) order[i] = by_color[i].second;
  } else {
    // heuristic fallback: BFS from the start, edges in (label, color, id) order
    std::vector<char> seen(n, 0);
    std::deque<int> queue{lts.start_left};
    seen[lts.start_left] = 1;
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      order.push_back(s);
      std::vector<std::tuple<std::string, int, std::string, int>> edges;
      for (const auto& [label, t] : lts.out[s]) edges.emplace_back(label, color[t], lts.ids[t], t);
      std::sort(edges.begin(), edges.end());
      for (const auto& [label, col, id, t] : edges)
        if (!seen[t]) {
          seen[t] = 1;
          queue.push_back(t);
        }
    }
    for (int s = 0; s < n; ++s)  // unreachable vertices last, by color then id
      if (!seen[s]) order.push_back(s);
  }

  std::vector<std::string> name(n);
  for (int i = 0; i < n; ++i) name[order[i]] = std::to_string(i);

  std::set<std::string> vertices;
  std::set<std::string> terminating;
  for (int s = 0; s < n; ++s) {
    vertices.insert(name[s]);
    if (lts.term[s]) terminating.insert(name[s]);
  }
  std::set<Transition> transitions;
  for (int s = 0; s < n; ++s)
    for (const auto& [label, t] : lts.out[s]) transitions.insert({name[s], label, name[t]});
  return Chart(std::move(vertices), name[lts.start_left], std::move(terminating),
               std::move(transitions));
}

bool isomorphic(const Chart& a, const Chart& b) {
  if (a.vertices().size() != b.vertices().size() ||
      a.transitions().size() != b.transitions().size() ||
      a.terminating().size() != b.terminating().size())
    return false;
  return canonical_form(a) == canonical_form(b);
}

}  // namespace rechart
