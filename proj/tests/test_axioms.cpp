#include "doctest.h"
#include "rechart/axioms.hpp"
#include "rechart/bisim.hpp"
#include "rechart/errors.hpp"
#include "rechart/semantics.hpp"
#include "support.hpp"

using namespace rechart;

namespace {

Derivation axiom_node(const std::string& name, const Substitution& subst) {
  auto [lhs, rhs] = instantiate(name, subst);
  return Derivation{Derivation::Rule::axiom, name, subst, nullptr, {}, lhs, rhs};
}

Derivation refl_node(const ExprPtr& e) {
  return Derivation{Derivation::Rule::refl, "", {}, nullptr, {}, e, e};
}

}  // namespace

TEST_CASE("the schema table matches the printed system") {
  CHECK(axiom_table().size() == 12);
  for (const auto& schema : axiom_table()) {
    bool unsound = schema.name == "B5" || schema.name == "B8";
    CHECK(schema.in_milner_system == !unsound);
  }
  auto show = [](const std::string& name, const Substitution& s) {
    auto [lhs, rhs] = instantiate(name, s);
    return to_string(lhs) + " = " + to_string(rhs);
  };
  Substitution efg{{"e", act("e")}, {"f", act("f")}, {"g", act("g")}};
  CHECK(show("B1", efg) == "e+(f+g) = e+f+g");
  CHECK(show("B2", efg) == "(e.f).g = e.f.g");
  CHECK(show("B3", efg) == "e+f = f+e");
  CHECK(show("B4", efg) == "(e+f).g = e.g+f.g");
  CHECK(show("B5", efg) == "e.(f+g) = e.f+e.g");
  CHECK(show("B6", efg) == "e+e = e");
  CHECK(show("B7", efg) == "e.0* = e");
  CHECK(show("B8", efg) == "e.0 = 0");
  CHECK(show("B9", efg) == "e+0 = e");
  CHECK(show("B10", efg) == "e* = 0*+e.e*");
  CHECK(show("B11", efg) == "e* = (0*+e)*");
  CHECK(show("A8", efg) == "0.e = 0");
}

TEST_CASE("instantiate on the worked examples") {
  Substitution ea{{"e", act("a")}};
  auto [b6l, b6r] = instantiate("B6", ea);
  CHECK(expr_equal(b6l, parse("a+a")));
  CHECK(expr_equal(b6r, act("a")));

  auto [b8l, b8r] = instantiate("B8", ea);
  CHECK(expr_equal(b8l, parse("a.0")));
  CHECK(expr_equal(b8r, zero()));

  auto [a8l, a8r] = instantiate("A8", ea);
  CHECK(expr_equal(a8l, parse("0.a")));
  CHECK(expr_equal(a8r, zero()));
}

TEST_CASE("instantiate rejects unknown axioms and missing metavariables") {
  CHECK_THROWS_AS(instantiate("B99", {}), std::invalid_argument);
  CHECK_THROWS_AS(instantiate("B1", {{"e", act("a")}}), std::invalid_argument);
}

TEST_CASE("check_derivation accepts reflexivity") {
  CHECK(check_derivation(refl_node(act("a"))).ok);
}

TEST_CASE("check_derivation rejects a fix node with an e.w.p. guard") {
  // premise x = 1.x + 0 (f = 1): the side condition fails
  Derivation premise = refl_node(act("x"));
  premise.rhs = parse("1.x+0");
  Derivation fix{Derivation::Rule::fix, "", {}, nullptr, {premise}, act("x"), parse("1*.0")};
  DerivationCheck result = check_derivation(fix);
  CHECK_FALSE(result.ok);
  CHECK(result.message.find("empty word property") != std::string::npos);
}

TEST_CASE("a fix node with a valid premise still fails on the side condition") {
  // 1* = 0* + 1.1*  (B10), then commute with B3 to match the fix shape
  Derivation b10 = axiom_node("B10", {{"e", one()}});
  Derivation b3 = axiom_node("B3", {{"e", parse("0*")}, {"f", parse("1.1*")}});
  Derivation trans{Derivation::Rule::trans, "", {}, nullptr, {b10, b3}, parse("1*"),
                   parse("1.1*+0*")};
  CHECK(check_derivation(trans).ok);
  Derivation fix{Derivation::Rule::fix, "", {}, nullptr, {trans}, parse("1*"), parse("1*.0*")};
  DerivationCheck result = check_derivation(fix);
  CHECK_FALSE(result.ok);
  CHECK(result.path == "root");
  CHECK(result.message.find("empty word property") != std::string::npos);
}

TEST_CASE("a guarded fix application is accepted") {
  // a* = 0* + a.a*  (B10), commuted into a* = a.a* + 0*, then fix gives
  // a* = a*.0*
  Derivation b10 = axiom_node("B10", {{"e", act("a")}});
  Derivation b3 = axiom_node("B3", {{"e", parse("0*")}, {"f", parse("a.a*")}});
  Derivation trans{Derivation::Rule::trans, "", {}, nullptr, {b10, b3}, parse("a*"),
                   parse("a.a*+0*")};
  Derivation fix{Derivation::Rule::fix, "", {}, nullptr, {trans}, parse("a*"), parse("a*.0*")};
  DerivationCheck result = check_derivation(fix);
  CHECK(result.ok);
  // the accepted conclusion is bisimilarity-sound
  CHECK(bisimilar(chart_of(parse("a*")), chart_of(parse("a*.0*"))).related);
}

TEST_CASE("check_derivation rejects axioms outside the system") {
  Substitution efg{{"e", act("a")}, {"f", act("b")}, {"g", act("c")}};
  DerivationCheck b5 = check_derivation(axiom_node("B5", efg));
  CHECK_FALSE(b5.ok);
  CHECK(b5.message.find("not part of the system") != std::string::npos);
  CHECK_FALSE(check_derivation(axiom_node("B8", {{"e", act("a")}})).ok);
}

TEST_CASE("check_derivation rejects shape violations with a path") {
  Derivation bad_refl = refl_node(act("a"));
  bad_refl.rhs = act("b");
  CHECK_FALSE(check_derivation(bad_refl).ok);

  Derivation symm{Derivation::Rule::symm, "", {}, nullptr, {refl_node(act("a"))}, act("a"),
                  act("b")};
  DerivationCheck symm_result = check_derivation(symm);
  CHECK_FALSE(symm_result.ok);
  CHECK(symm_result.path == "root");

  Derivation inner = refl_node(act("a"));
  inner.rhs = act("c");  // invalid leaf below a valid symm node
  Derivation outer{Derivation::Rule::symm, "", {}, nullptr, {inner}, act("c"), act("a")};
  DerivationCheck outer_result = check_derivation(outer);
  CHECK_FALSE(outer_result.ok);
  CHECK(outer_result.path == "root/0");

  Derivation trans{Derivation::Rule::trans, "", {}, nullptr,
                   {refl_node(act("a")), refl_node(act("b"))}, act("a"), act("b")};
  CHECK_FALSE(check_derivation(trans).ok);  // middle terms differ
}

TEST_CASE("context nodes require exactly one hole and a matching conclusion") {
  Derivation premise = axiom_node("B6", {{"e", act("a")}});
  ExprPtr context = parse_context("_.b");
  Derivation cxt{Derivation::Rule::cxt, "", {}, context, {premise}, parse("(a+a).b"),
                 parse("a.b")};
  CHECK(check_derivation(cxt).ok);

  Derivation no_hole{Derivation::Rule::cxt, "", {}, parse_context("c.b"), {premise},
                     parse("c.b"), parse("c.b")};
  CHECK_FALSE(check_derivation(no_hole).ok);

  Derivation two_holes{Derivation::Rule::cxt, "", {}, parse_context("_+_"), {premise},
                       parse("(a+a)+(a+a)"), parse("a+a")};
  CHECK_FALSE(check_derivation(two_holes).ok);

  Derivation mismatch{Derivation::Rule::cxt, "", {}, context, {premise}, parse("(a+a).b"),
                      parse("b.b")};
  CHECK_FALSE(check_derivation(mismatch).ok);
}

TEST_CASE("derivation JSON round trip and checking") {
  const char* text = R"({
    "rule": "trans",
    "premises": [
      {"rule": "axiom", "name": "B10", "subst": {"e": "a"},
       "conclusion": {"lhs": "a*", "rhs": "0*+a.a*"}},
      {"rule": "refl", "premises": [], "conclusion": {"lhs": "0*+a.a*", "rhs": "0*+a.a*"}}
    ],
    "conclusion": {"lhs": "a*", "rhs": "0*+a.a*"}
  })";
  Derivation d = derivation_from_json(text);
  CHECK(check_derivation(d).ok);
  Derivation again = derivation_from_json(derivation_to_json(d));
  CHECK(check_derivation(again).ok);
  CHECK(expr_equal(again.lhs, parse("a*")));

  CHECK_THROWS_AS(derivation_from_json("{}"), FormatError);
  CHECK_THROWS_AS(derivation_from_json(R"({"rule":"guess","conclusion":{"lhs":"a","rhs":"a"}})"),
                  FormatError);
  CHECK_THROWS_AS(
      derivation_from_json(R"({"rule":"refl","conclusion":{"lhs":"((a","rhs":"a"}})"),
      FormatError);
}

TEST_CASE("fuzz_soundness finds no failures for a sound axiom") {
  FuzzReport report = fuzz_soundness("B6", 200, 7);
  CHECK(report.trials == 200);
  CHECK(report.failures.empty());
}

TEST_CASE("fuzzing is reproducible for a fixed seed") {
  FuzzReport first = fuzz_soundness("B8", 50, 11);
  FuzzReport second = fuzz_soundness("B8", 50, 11);
  REQUIRE(first.failures.size() == second.failures.size());
  for (std::size_t i = 0; i < first.failures.size(); ++i)
    CHECK(expr_equal(first.failures[i].lhs, second.failures[i].lhs));
  CHECK_FALSE(first.failures.empty());  // e.0 = 0 is unsound and easy to hit
}

TEST_CASE("the classic counterexamples to B5 and B8 are not bisimilar") {
  // B8 with e := a
  CHECK_FALSE(bisimilar(chart_of(parse("a.0")), chart_of(zero())).related);
  // B5 with e := a, f := b, g := c
  CHECK_FALSE(bisimilar(chart_of(parse("a.(b+c)")), chart_of(parse("a.b+a.c"))).related);
}

TEST_CASE("accepted derivations conclude bisimilar pairs") {
  std::vector<Derivation> corpus;
  corpus.push_back(axiom_node("B1", {{"e", parse("a")}, {"f", parse("b*")}, {"g", parse("0")}}));
  corpus.push_back(axiom_node("B7", {{"e", parse("a.b")}}));
  corpus.push_back(axiom_node("B11", {{"e", parse("a+1")}}));
  corpus.push_back(axiom_node("A8", {{"e", parse("(a.b)*")}}));
  Derivation symm{Derivation::Rule::symm, "", {}, nullptr, {corpus[1]},
                  corpus[1].rhs, corpus[1].lhs};
  corpus.push_back(symm);
  for (const auto& d : corpus) {
    REQUIRE(check_derivation(d).ok);
    CHECK(bisimilar(chart_of(d.lhs), chart_of(d.rhs)).related);
  }
}
