#include "support.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace rechart::testing {

Chart fixture_c() {
  return Chart({"u0", "u1", "u2"}, "u0", {},
               {{"u0", "a", "u1"}, {"u1", "a", "u2"}, {"u2", "b", "u1"}, {"u2", "b", "u0"}});
}

Chart fixture_n1() {
  return Chart({"v0", "v1"}, "v0", {"v0", "v1"}, {{"v0", "a", "v1"}, {"v1", "b", "v0"}});
}

Chart fixture_n2() {
  return Chart({"w0", "w1", "w2"}, "w0", {},
               {{"w0", "a1", "w1"},
                {"w0", "a2", "w2"},
                {"w1", "b1", "w0"},
                {"w1", "b2", "w2"},
                {"w2", "c1", "w0"},
                {"w2", "c2", "w1"}});
}

bool naive_bisimilar(const Chart& g, const Chart& h) {
  using State = std::pair<char, std::string>;  // side, vertex
  auto term = [&](const State& s) {
    return s.first == 0 ? g.terminates(s.second) : h.terminates(s.second);
  };
  auto out = [&](const State& s) {
    return s.first == 0 ? g.out(s.second) : h.out(s.second);
  };

  std::vector<State> states;
  for (const auto& v : g.vertices()) states.push_back({0, v});
  for (const auto& v : h.vertices()) states.push_back({1, v});

  std::set<std::pair<State, State>> related;
  for (const auto& x : states)
    for (const auto& y : states)
      if (term(x) == term(y)) related.insert({x, y});

  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::pair<State, State>> next;
    for (const auto& [x, y] : related) {
      bool ok = true;
      for (const auto& t : out(x)) {  // forth
        State xt{x.first, t.to};
        bool matched = false;
        for (const auto& u : out(y))
          if (u.label == t.label && related.count({xt, State{y.first, u.to}})) {
            matched = true;
            break;
          }
        if (!matched) {
          ok = false;
          break;
        }
      }
      if (ok)
        for (const auto& u : out(y)) {  // back
          State yu{y.first, u.to};
          bool matched = false;
          for (const auto& t : out(x))
            if (t.label == u.label && related.count({State{x.first, t.to}, yu})) {
              matched = true;
              break;
            }
          if (!matched) {
            ok = false;
            break;
          }
        }
      if (ok)
        next.insert({x, y});
      else
        changed = true;
    }
    related = std::move(next);
  }
  return related.count({State{0, g.start()}, State{1, h.start()}}) > 0;
}

bool kahn_has_reachable_cycle(const Chart& c) {
  Chart reachable = gc(c);
  std::map<std::string, int> indegree;
  for (const auto& v : reachable.vertices()) indegree[v] = 0;
  for (const auto& t : reachable.transitions()) ++indegree[t.to];
  std::vector<std::string> ready;
  for (const auto& [v, d] : indegree)
    if (d == 0) ready.push_back(v);
  std::size_t removed = 0;
  while (!ready.empty()) {
    std::string v = ready.back();
    ready.pop_back();
    ++removed;
    for (const auto& t : reachable.out(v))
      if (--indegree[t.to] == 0) ready.push_back(t.to);
  }
  return removed != reachable.vertices().size();
}

namespace {

void enumerate_into(std::size_t n, const std::vector<std::string>& alphabet,
                    std::vector<std::vector<ExprPtr>>& by_size) {
  // by_size[k] holds all expressions of size exactly k; filled bottom-up
  while (by_size.size() <= n) {
    std::size_t k = by_size.size();
    std::vector<ExprPtr> exprs;
    if (k == 1) {
      exprs.push_back(zero());
      exprs.push_back(one());
      for (const auto& a : alphabet) exprs.push_back(act(a));
    } else if (k >= 2) {
      for (const auto& body : by_size[k - 1]) exprs.push_back(star(body));
      for (std::size_t left = 1; left + 1 < k; ++left) {
        for (const auto& l : by_size[left])
          for (const auto& r : by_size[k - 1 - left]) {
            exprs.push_back(sum(l, r));
            exprs.push_back(prod(l, r));
          }
      }
    }
    by_size.push_back(std::move(exprs));
  }
}

}  // namespace

std::vector<ExprPtr> enumerate_exprs(std::size_t n, const std::vector<std::string>& alphabet) {
  std::vector<std::vector<ExprPtr>> by_size{{}};
  enumerate_into(n, alphabet, by_size);
  return by_size[n];
}

std::vector<ExprPtr> enumerate_exprs_upto(std::size_t n,
                                          const std::vector<std::string>& alphabet) {
  std::vector<std::vector<ExprPtr>> by_size{{}};
  enumerate_into(n, alphabet, by_size);
  std::vector<ExprPtr> all;
  for (const auto& bucket : by_size)
    for (const auto& e : bucket) all.push_back(e);
  return all;
}

Chart random_chart(Rng& rng, std::size_t max_vertices, unsigned term_per_mille,
                   unsigned edge_per_mille) {
  std::size_t n = 1 + rng.below(max_vertices);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  std::set<std::string> vertices(ids.begin(), ids.end());
  std::set<std::string> terminating;
  for (const auto& v : ids)
    if (rng.chance(term_per_mille, 1000)) terminating.insert(v);
  std::set<Transition> transitions;
  for (const auto& from : ids)
    for (const auto& to : ids)
      for (const std::string label : {"a", "b"})
        if (rng.chance(edge_per_mille, 1000)) transitions.insert({from, label, to});
  return gc(Chart(std::move(vertices), ids[0], std::move(terminating), std::move(transitions)));
}

ExprPtr random_deep_expr(Rng& rng, std::size_t max_size,
                         const std::vector<std::string>& alphabet) {
  enum { k_zero, k_one, k_act, k_star, k_sum, k_prod };
  std::vector<int> pool{k_zero, k_one, k_act, k_act};
  if (max_size >= 2) pool.insert(pool.end(), 3, k_star);
  if (max_size >= 3) {
    pool.insert(pool.end(), 3, k_sum);
    pool.insert(pool.end(), 4, k_prod);
  }
  int choice = pool[rng.below(pool.size())];
  switch (choice) {
    case k_zero:
      return zero();
    case k_one:
      return one();
    case k_act:
      return act(alphabet[rng.below(alphabet.size())]);
    case k_star:
      return star(random_deep_expr(rng, max_size - 1, alphabet));
    default: {
      std::size_t left = 1 + rng.below(max_size - 2);
      ExprPtr l = random_deep_expr(rng, left, alphabet);
      ExprPtr r = random_deep_expr(rng, max_size - 1 - left, alphabet);
      return choice == k_sum ? sum(std::move(l), std::move(r))
                             : prod(std::move(l), std::move(r));
    }
  }
}

std::optional<CliResult> run_cli(const std::string& args) {
  const char* cli = std::getenv("RECHART_CLI");
  if (!cli || !*cli) return std::nullopt;
  std::string command = std::string("'") + cli + "' " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + command);
  std::string output;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return CliResult{code, output};
}

std::string scratch_dir() {
  static const std::string dir = [] {
    auto base = std::filesystem::temp_directory_path() /
                ("rechart-tests-" + std::to_string(::getpid()));
    std::filesystem::create_directories(base);
    return base.string();
  }();
  return dir;
}

std::string write_scratch_file(const std::string& name, const std::string& contents) {
  std::string path = scratch_dir() + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  return path;
}

}  // namespace rechart::testing
