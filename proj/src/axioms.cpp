#include "rechart/axioms.hpp"

#include <stdexcept>

#include "json.hpp"
#include "rechart/bisim.hpp"
#include "rechart/errors.hpp"
#include "rechart/gen.hpp"
#include "rechart/semantics.hpp"

namespace rechart {

namespace {

ExprPtr subst_letters(const ExprPtr& pattern, const Substitution& s) {
  switch (pattern->kind()) {
    case ExprKind::zero:
    case ExprKind::one:
    case ExprKind::hole:
      return pattern;
    case ExprKind::act: {
      auto it = s.find(pattern->letter());
      return it == s.end() ? pattern : it->second;
    }
    case ExprKind::sum:
      return sum(subst_letters(pattern->left(), s), subst_letters(pattern->right(), s));
    case ExprKind::prod:
      return prod(subst_letters(pattern->left(), s), subst_letters(pattern->right(), s));
    case ExprKind::star:
      return star(subst_letters(pattern->body(), s));
  }
  return pattern;
}

std::size_t count_holes(const ExprPtr& e) {
  switch (e->kind()) {
    case ExprKind::hole:
      return 1;
    case ExprKind::zero:
    case ExprKind::one:
    case ExprKind::act:
      return 0;
    case ExprKind::star:
      return count_holes(e->body());
    case ExprKind::sum:
    case ExprKind::prod:
      return count_holes(e->left()) + count_holes(e->right());
  }
  return 0;
}

ExprPtr fill_hole(const ExprPtr& context, const ExprPtr& e) {
  switch (context->kind()) {
    case ExprKind::hole:
      return e;
    case ExprKind::zero:
    case ExprKind::one:
    case ExprKind::act:
      return context;
    case ExprKind::star:
      return star(fill_hole(context->body(), e));
    case ExprKind::sum:
      return sum(fill_hole(context->left(), e), fill_hole(context->right(), e));
    case ExprKind::prod:
      return prod(fill_hole(context->left(), e), fill_hole(context->right(), e));
  }
  return context;
}

}  // namespace

const std::vector<AxiomSchema>& axiom_table() {
  static const std::vector<AxiomSchema> table = [] {
    const ExprPtr e = act("e"), f = act("f"), g = act("g");
    std::vector<AxiomSchema> t;
    t.push_back({"B1", {"e", "f", "g"}, sum(e, sum(f, g)), sum(sum(e, f), g), true});
    t.push_back({"B2", {"e", "f", "g"}, prod(prod(e, f), g), prod(e, prod(f, g)), true});
    t.push_back({"B3", {"e", "f"}, sum(e, f), sum(f, e), true});
    t.push_back({"B4", {"e", "f", "g"}, prod(sum(e, f), g), sum(prod(e, g), prod(f, g)), true});
    t.push_back({"B5", {"e", "f", "g"}, prod(e, sum(f, g)), sum(prod(e, f), prod(e, g)), false});
    t.push_back({"B6", {"e"}, sum(e, e), e, true});
    t.push_back({"B7", {"e"}, prod(e, star(zero())), e, true});
    t.push_back({"B8", {"e"}, prod(e, zero()), zero(), false});
    t.push_back({"B9", {"e"}, sum(e, zero()), e, true});
    t.push_back({"B10", {"e"}, star(e), sum(star(zero()), prod(e, star(e))), true});
    t.push_back({"B11", {"e"}, star(e), star(sum(star(zero()), e)), true});
    t.push_back({"A8", {"e"}, prod(zero(), e), zero(), true});
    return t;
  }();
  return table;
}

const AxiomSchema* find_axiom(const std::string& name) {
  for (const auto& schema : axiom_table())
    if (schema.name == name) return &schema;
  return nullptr;
}

std::pair<ExprPtr, ExprPtr> instantiate(const std::string& name, const Substitution& s) {
  const AxiomSchema* schema = find_axiom(name);
  if (!schema) throw std::invalid_argument("unknown axiom '" + name + "'");
  for (const auto& var : schema->vars)
    if (!s.count(var))
      throw std::invalid_argument("axiom " + name + " needs metavariable '" + var + "'");
  return {subst_letters(schema->lhs, s), subst_letters(schema->rhs, s)};
}

namespace {

struct Checker {
  DerivationCheck failure;
  bool failed = false;

  bool fail(const std::string& path, const std::string& message) {
    if (!failed) {
      failed = true;
      failure = {false, path, message};
    }
    return false;
  }

  bool expect_premises(const Derivation& d, std::size_t n, const std::string& path) {
    if (d.premises.size() == n) return true;
    return fail(path, "rule needs " + std::to_string(n) + " premises, got " +
                          std::to_string(d.premises.size()));
  }

  bool check(const Derivation& d, const std::string& path) {
    if (!d.lhs || !d.rhs) return fail(path, "node has no conclusion");
    switch (d.rule) {
      case Derivation::Rule::refl:
        if (!expect_premises(d, 0, path)) return false;
        if (!expr_equal(d.lhs, d.rhs))
          return fail(path, "reflexivity requires equal sides, got " + to_string(d.lhs) +
                                " = " + to_string(d.rhs));
        break;
      case Derivation::Rule::axiom: {
        if (!expect_premises(d, 0, path)) return false;
        const AxiomSchema* schema = find_axiom(d.axiom_name);
        if (!schema) return fail(path, "unknown axiom '" + d.axiom_name + "'");
        if (!schema->in_milner_system)
          return fail(path, "axiom " + d.axiom_name +
                                " is not sound under the process semantics and is not part of "
                                "the system");
        std::pair<ExprPtr, ExprPtr> inst;
        try {
          inst = instantiate(d.axiom_name, d.subst);
        } catch (const std::invalid_argument& e) {
          return fail(path, e.what());
        }
        if (!expr_equal(d.lhs, inst.first) || !expr_equal(d.rhs, inst.second))
          return fail(path, "conclusion does not match the instance " + to_string(inst.first) +
                                " = " + to_string(inst.second));
        break;
      }
      case Derivation::Rule::symm: {
        if (!expect_premises(d, 1, path)) return false;
        const Derivation& p = d.premises[0];
        if (!p.lhs || !p.rhs) return fail(path + "/0", "node has no conclusion");
        if (!expr_equal(d.lhs, p.rhs) || !expr_equal(d.rhs, p.lhs))
          return fail(path, "symmetry must swap the premise's sides");
        break;
      }
      case Derivation::Rule::trans: {
        if (!expect_premises(d, 2, path)) return false;
        const Derivation& p = d.premises[0];
        const Derivation& q = d.premises[1];
        if (!p.lhs || !p.rhs || !q.lhs || !q.rhs) return fail(path, "premise has no conclusion");
        if (!expr_equal(d.lhs, p.lhs))
          return fail(path, "transitivity: conclusion lhs differs from first premise lhs");
        if (!expr_equal(p.rhs, q.lhs))
          return fail(path, "transitivity: middle terms differ: " + to_string(p.rhs) +
                                " vs " + to_string(q.lhs));
        if (!expr_equal(d.rhs, q.rhs))
          return fail(path, "transitivity: conclusion rhs differs from second premise rhs");
        break;
      }
      case Derivation::Rule::cxt: {
        if (!expect_premises(d, 1, path)) return false;
        if (!d.context) return fail(path, "context rule needs a context");
        if (count_holes(d.context) != 1)
          return fail(path, "context must contain exactly one hole, got " +
                                std::to_string(count_holes(d.context)));
        const Derivation& p = d.premises[0];
        if (!p.lhs || !p.rhs) return fail(path + "/0", "node has no conclusion");
        if (!expr_equal(d.lhs, fill_hole(d.context, p.lhs)) ||
            !expr_equal(d.rhs, fill_hole(d.context, p.rhs)))
          return fail(path, "conclusion does not match the context applied to the premise");
        break;
      }
      case Derivation::Rule::fix: {
        if (!expect_premises(d, 1, path)) return false;
        const Derivation& p = d.premises[0];
        if (!p.lhs || !p.rhs) return fail(path + "/0", "node has no conclusion");
        // premise e = f.e + g, conclusion e = f*.g
        if (!expr_equal(d.lhs, p.lhs))
          return fail(path, "fix: conclusion lhs must equal the premise lhs");
        if (p.rhs->kind() != ExprKind::sum || p.rhs->left()->kind() != ExprKind::prod)
          return fail(path, "fix: premise rhs must have shape f.e + g");
        const ExprPtr& f = p.rhs->left()->left();
        if (!expr_equal(p.rhs->left()->right(), p.lhs))
          return fail(path, "fix: premise rhs must have shape f.e + g with e the premise lhs");
        const ExprPtr& g = p.rhs->right();
        if (!expr_equal(d.rhs, prod(star(f), g)))
          return fail(path, "fix: conclusion rhs must be " + to_string(prod(star(f), g)));
        if (ewp(f))
          return fail(path, "fix: side condition violated, '" + to_string(f) +
                                "' has the empty word property");
        break;
      }
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i)
      if (!check(d.premises[i], path + "/" + std::to_string(i))) return false;
    return true;
  }
};

const char* rule_name(Derivation::Rule r) {
  switch (r) {
    case Derivation::Rule::axiom: return "axiom";
    case Derivation::Rule::refl: return "refl";
    case Derivation::Rule::symm: return "symm";
    case Derivation::Rule::trans: return "trans";
    case Derivation::Rule::cxt: return "cxt";
    case Derivation::Rule::fix: return "fix";
  }
  return "?";
}

Derivation node_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("derivation node must be a JSON object");
  if (!j.contains("rule") || !j["rule"].is_string())
    throw FormatError("derivation node needs a string 'rule'");
  std::string rule = j["rule"].get<std::string>();

  Derivation d;
  if (rule == "axiom")
    d.rule = Derivation::Rule::axiom;
  else if (rule == "refl")
    d.rule = Derivation::Rule::refl;
  else if (rule == "symm")
    d.rule = Derivation::Rule::symm;
  else if (rule == "trans")
    d.rule = Derivation::Rule::trans;
  else if (rule == "cxt")
    d.rule = Derivation::Rule::cxt;
  else if (rule == "fix")
    d.rule = Derivation::Rule::fix;
  else
    throw FormatError("unknown rule '" + rule + "'");

  auto expr_of = [](const nlohmann::json& v, const char* what) {
    if (!v.is_string()) throw FormatError(std::string(what) + " must be an expression string");
    try {
      return parse(v.get<std::string>());
    } catch (const ParseError& e) {
      throw FormatError(std::string(what) + ": " + e.what());
    }
  };

  if (j.contains("name")) {
    if (!j["name"].is_string()) throw FormatError("'name' must be a string");
    d.axiom_name = j["name"].get<std::string>();
  }
  if (j.contains("subst")) {
    if (!j["subst"].is_object()) throw FormatError("'subst' must be an object");
    for (const auto& [var, value] : j["subst"].items())
      d.subst[var] = expr_of(value, "substitution entry");
  }
  if (j.contains("context")) {
    if (!j["context"].is_string()) throw FormatError("'context' must be a string");
    try {
      d.context = parse_context(j["context"].get<std::string>());
    } catch (const ParseError& e) {
      throw FormatError(std::string("context: ") + e.what());
    }
  }
  if (j.contains("premises")) {
    if (!j["premises"].is_array()) throw FormatError("'premises' must be an array");
    for (const auto& p : j["premises"]) d.premises.push_back(node_from_json(p));
  }
  if (!j.contains("conclusion") || !j["conclusion"].is_object() ||
      !j["conclusion"].contains("lhs") || !j["conclusion"].contains("rhs"))
    throw FormatError("derivation node needs a conclusion {lhs, rhs}");
  d.lhs = expr_of(j["conclusion"]["lhs"], "conclusion lhs");
  d.rhs = expr_of(j["conclusion"]["rhs"], "conclusion rhs");
  return d;
}

nlohmann::json node_to_json(const Derivation& d) {
  nlohmann::json j;
  j["rule"] = rule_name(d.rule);
  if (d.rule == Derivation::Rule::axiom) {
    j["name"] = d.axiom_name;
    auto& s = j["subst"] = nlohmann::json::object();
    for (const auto& [var, value] : d.subst) s[var] = to_string(value);
  }
  if (d.context) j["context"] = to_string(d.context);
  auto& premises = j["premises"] = nlohmann::json::array();
  for (const auto& p : d.premises) premises.push_back(node_to_json(p));
  j["conclusion"] = {{"lhs", to_string(d.lhs)}, {"rhs", to_string(d.rhs)}};
  return j;
}

}  // namespace

DerivationCheck check_derivation(const Derivation& d) {
  Checker checker;
  if (checker.check(d, "root")) return {true, "", ""};
  return checker.failure;
}

Derivation derivation_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return node_from_json(j);
}

std::string derivation_to_json(const Derivation& d) { return node_to_json(d).dump(2); }

FuzzReport fuzz_soundness(const std::string& name, int n, std::uint64_t seed) {
  const AxiomSchema* schema = find_axiom(name);
  if (!schema) throw std::invalid_argument("unknown axiom '" + name + "'");
  if (n < 1) throw std::invalid_argument("trial count must be at least 1");

  static const std::vector<std::string> alphabet{"a", "b", "c"};
  Rng root(seed);
  FuzzReport report{name, n, {}};
  for (int trial = 0; trial < n; ++trial) {
    Rng rng = root.split(static_cast<std::uint64_t>(trial));
    Substitution subst;
    for (const auto& var : schema->vars) subst[var] = random_expr(rng, 8, alphabet);
    auto [lhs, rhs] = instantiate(name, subst);
    if (!bisimilar(chart_of(lhs), chart_of(rhs)).related)
      report.failures.push_back({trial, subst, lhs, rhs});
  }
  return report;
}

}  // namespace rechart
