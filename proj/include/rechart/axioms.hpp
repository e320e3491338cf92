#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rechart/regexp.hpp"

namespace rechart {

/// One axiom schema of the equational system. Metavariables e, f, g
/// appear as letter leaves in the patterns. `in_milner_system` is false
/// exactly for the two schemas that are unsound under the process
/// semantics (B5 left-distributivity and B8 e.0 = 0).
struct AxiomSchema {
  std::string name;
  std::vector<std::string> vars;
  ExprPtr lhs;
  ExprPtr rhs;
  bool in_milner_system;
};

/// B1..B11 plus A8, in table order.
const std::vector<AxiomSchema>& axiom_table();

/// Null if the name is unknown.
const AxiomSchema* find_axiom(const std::string& name);

using Substitution = std::map<std::string, ExprPtr>;

/// Instantiates the named schema. Throws std::invalid_argument on an
/// unknown axiom or a missing metavariable.
std::pair<ExprPtr, ExprPtr> instantiate(const std::string& name, const Substitution& s);

/// A proof tree. Every node carries its conclusion; leafs are axiom
/// instances or reflexivity, inner nodes apply symmetry, transitivity,
/// closure under contexts, or the guarded fixed-point rule
///   e = f.e + g  =>  e = f*.g   (only when f lacks the empty word property).
struct Derivation {
  enum class Rule { axiom, refl, symm, trans, cxt, fix };

  Rule rule;
  std::string axiom_name;  // axiom nodes
  Substitution subst;      // axiom nodes
  ExprPtr context;         // cxt nodes; expression with exactly one hole
  std::vector<Derivation> premises;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct DerivationCheck {
  bool ok = false;
  std::string path;     // node path like "root/0/1" when not ok
  std::string message;  // reason when not ok
};

/// Validates every node: axiom nodes must cite a schema of Milner's
/// system and match its instantiation, rule nodes must follow their
/// premises' stated conclusions, and fix nodes must satisfy the e.w.p.
/// side condition. Never throws; invalid trees yield ok = false with a
/// diagnostic path.
DerivationCheck check_derivation(const Derivation& d);

Derivation derivation_from_json(const std::string& text);  // throws FormatError
std::string derivation_to_json(const Derivation& d);

struct FuzzFailure {
  int trial;
  Substitution subst;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct FuzzReport {
  std::string axiom;
  int trials = 0;
  std::vector<FuzzFailure> failures;
};

/// Samples n random substitutions (expressions of size <= 8 over a
/// three-letter alphabet, per-trial seeds derived from `seed`) and
/// checks each instance of the schema for bisimilarity of the two
/// charts. Reports the failing instances.
FuzzReport fuzz_soundness(const std::string& name, int n, std::uint64_t seed);

}  // namespace rechart
