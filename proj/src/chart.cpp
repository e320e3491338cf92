#include "rechart/chart.hpp"

#include <deque>
#include <stdexcept>

#include "json.hpp"
#include "rechart/errors.hpp"
#include "rechart/regexp.hpp"

namespace rechart {

Chart::Chart(std::set<std::string> vertices, std::string start,
             std::set<std::string> terminating, std::set<Transition> transitions)
    : vertices_(std::move(vertices)),
      start_(std::move(start)),
      terminating_(std::move(terminating)),
      transitions_(std::move(transitions)) {
  if (!vertices_.count(start_))
    throw std::invalid_argument("chart start vertex '" + start_ + "' is not a vertex");
  for (const auto& v : terminating_)
    if (!vertices_.count(v))
      throw std::invalid_argument("terminating vertex '" + v + "' is not a vertex");
  for (const auto& t : transitions_)
    if (!vertices_.count(t.from) || !vertices_.count(t.to))
      throw std::invalid_argument("transition endpoint is not a vertex: " + t.from + " -" +
                                  t.label + "-> " + t.to);
}

std::vector<Transition> Chart::out(const std::string& v) const {
  std::vector<Transition> result;
  for (auto it = transitions_.lower_bound(Transition{v, "", ""});
       it != transitions_.end() && it->from == v; ++it)
    result.push_back(*it);
  return result;
}

std::set<std::string> Chart::labels() const {
  std::set<std::string> result;
  for (const auto& t : transitions_) result.insert(t.label);
  return result;
}

Chart gc(const Chart& c) {
  std::set<std::string> reached{c.start()};
  std::deque<std::string> queue{c.start()};
  while (!queue.empty()) {
    std::string v = queue.front();
    queue.pop_front();
    for (const auto& t : c.out(v))
      if (reached.insert(t.to).second) queue.push_back(t.to);
  }
  std::set<std::string> terminating;
  for (const auto& v : c.terminating())
    if (reached.count(v)) terminating.insert(v);
  std::set<Transition> transitions;
  for (const auto& t : c.transitions())
    if (reached.count(t.from)) transitions.insert(t);
  return Chart(std::move(reached), c.start(), std::move(terminating), std::move(transitions));
}

bool has_infinite_trace(const Chart& c) {
  // iterative DFS from the start, three colors
  enum : char { white, grey, black };
  std::map<std::string, char> color;
  struct Frame {
    std::string vertex;
    std::vector<Transition> out;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({c.start(), c.out(c.start())});
  color[c.start()] = grey;
  while (!stack.empty()) {
    Frame& frame = stack.back();
    if (frame.next == frame.out.size()) {
      color[frame.vertex] = black;
      stack.pop_back();
      continue;
    }
    const std::string& to = frame.out[frame.next++].to;
    auto it = color.find(to);
    if (it == color.end()) {
      color[to] = grey;
      stack.push_back({to, c.out(to)});
    } else if (it->second == grey) {
      return true;  // back edge
    }
  }
  return false;
}

namespace {

nlohmann::json chart_json(const Chart& c) {
  nlohmann::json j;
  j["vertices"] = c.vertices();
  j["start"] = c.start();
  j["terminating"] = c.terminating();
  auto& transitions = j["transitions"] = nlohmann::json::array();
  for (const auto& t : c.transitions())
    transitions.push_back({{"from", t.from}, {"label", t.label}, {"to", t.to}});
  return j;
}

}  // namespace

std::string to_json(const Chart& c) { return chart_json(c).dump(2); }

std::string to_json(const Chart& c, const LevelMap& witness) {
  nlohmann::json j = chart_json(c);
  auto& entries = j["witness"] = nlohmann::json::array();
  for (const auto& [t, level] : witness)
    entries.push_back({{"from", t.from}, {"label", t.label}, {"to", t.to}, {"level", level}});
  return j.dump(2);
}

ChartDoc chart_doc_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("chart document must be a JSON object");

  auto want = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(std::string("missing key '") + key + "'");
    return *it;
  };

  const auto& jvertices = want("vertices");
  if (!jvertices.is_array()) throw FormatError("'vertices' must be an array of strings");
  std::set<std::string> vertices;
  for (const auto& v : jvertices) {
    if (!v.is_string()) throw FormatError("'vertices' must be an array of strings");
    if (!vertices.insert(v.get<std::string>()).second)
      throw FormatError("duplicate vertex id '" + v.get<std::string>() + "'");
  }

  const auto& jstart = want("start");
  if (!jstart.is_string()) throw FormatError("'start' must be a string");
  std::string start = jstart.get<std::string>();
  if (!vertices.count(start)) throw FormatError("start vertex '" + start + "' is not a vertex");

  const auto& jterm = want("terminating");
  if (!jterm.is_array()) throw FormatError("'terminating' must be an array of strings");
  std::set<std::string> terminating;
  for (const auto& v : jterm) {
    if (!v.is_string()) throw FormatError("'terminating' must be an array of strings");
    std::string id = v.get<std::string>();
    if (!vertices.count(id)) throw FormatError("terminating vertex '" + id + "' is not a vertex");
    terminating.insert(id);
  }

  auto transition_of = [&](const nlohmann::json& e, const char* what) {
    if (!e.is_object() || !e.contains("from") || !e.contains("label") || !e.contains("to") ||
        !e["from"].is_string() || !e["label"].is_string() || !e["to"].is_string())
      throw FormatError(std::string(what) + " entries need string fields from/label/to");
    Transition t{e["from"].get<std::string>(), e["label"].get<std::string>(),
                 e["to"].get<std::string>()};
    if (!vertices.count(t.from) || !vertices.count(t.to))
      throw FormatError(std::string(what) + " references unknown vertex: " + t.from + " -" +
                        t.label + "-> " + t.to);
    if (!is_letter(t.label))
      throw FormatError("label '" + t.label + "' is not an action name");
    return t;
  };

  const auto& jtrans = want("transitions");
  if (!jtrans.is_array()) throw FormatError("'transitions' must be an array");
  std::set<Transition> transitions;  // duplicates collapse silently (set semantics)
  for (const auto& e : jtrans) transitions.insert(transition_of(e, "transition"));

  LevelMap witness;
  if (auto it = j.find("witness"); it != j.end()) {
    if (!it->is_array()) throw FormatError("'witness' must be an array");
    for (const auto& e : *it) {
      Transition t = transition_of(e, "witness");
      if (!transitions.count(t))
        throw FormatError("witness entry is not a transition of the chart: " + t.from + " -" +
                          t.label + "-> " + t.to);
      if (!e.contains("level") || !e["level"].is_number_integer() || e["level"].get<int>() < 1)
        throw FormatError("witness entries need a positive integer 'level'");
      if (!witness.emplace(t, e["level"].get<int>()).second)
        throw FormatError("duplicate witness entry for transition " + t.from + " -" + t.label +
                          "-> " + t.to);
    }
  }

  return ChartDoc{Chart(std::move(vertices), std::move(start), std::move(terminating),
                        std::move(transitions)),
                  std::move(witness)};
}

Chart from_json(const std::string& text) { return chart_doc_from_json(text).chart; }

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_dot(const Chart& c, const LevelMap& decorations) {
  std::string entry = "__start";
  while (c.has_vertex(entry)) entry += '_';

  std::string out = "digraph chart {\n";
  out += "  rankdir=TB;\n";
  out += "  " + dot_quote(entry) + " [shape=none, label=\"\"];\n";
  for (const auto& v : c.vertices())
    out += "  " + dot_quote(v) + " [shape=" + (c.terminates(v) ? "doublecircle" : "circle") +
           "];\n";
  out += "  " + dot_quote(entry) + " -> " + dot_quote(c.start()) + ";\n";
  for (const auto& t : c.transitions()) {
    std::string label = t.label;
    if (auto it = decorations.find(t); it != decorations.end())
      label += " [" + std::to_string(it->second) + "]";
    out += "  " + dot_quote(t.from) + " -> " + dot_quote(t.to) + " [label=" + dot_quote(label) +
           "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace rechart
