#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace rechart {

enum class ExprKind { zero, one, act, sum, prod, star, hole };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable regular-expression tree with a unary star.
///
/// Leaves are the constants 0 and 1 and action letters; inner nodes are
/// +, the explicit product operator `.`, and postfix *. Structural
/// equality is the state identity used by the chart construction, so no
/// algebraic normalization is ever applied. The `hole` kind only occurs
/// in proof-rule contexts (see axioms.hpp); the semantic operations
/// reject it.
class Expr {
public:
  Expr(ExprKind kind, std::string letter, ExprPtr left, ExprPtr right)
      : kind_(kind), letter_(std::move(letter)), left_(std::move(left)), right_(std::move(right)) {}

  ExprKind kind() const noexcept { return kind_; }
  const std::string& letter() const noexcept { return letter_; }  // act only
  const ExprPtr& left() const noexcept { return left_; }          // sum/prod
  const ExprPtr& right() const noexcept { return right_; }        // sum/prod
  const ExprPtr& body() const noexcept { return left_; }          // star

private:
  ExprKind kind_;
  std::string letter_;
  ExprPtr left_, right_;
};

ExprPtr zero();
ExprPtr one();
ExprPtr act(std::string letter);
ExprPtr sum(ExprPtr left, ExprPtr right);
ExprPtr prod(ExprPtr left, ExprPtr right);
ExprPtr star(ExprPtr body);
ExprPtr hole();

/// True iff `text` conforms to the action-name grammar [a-z][a-zA-Z0-9_]*.
bool is_letter(std::string_view text);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
int expr_compare(const ExprPtr& a, const ExprPtr& b);  // total order, 0 iff equal

struct ExprLess {
  bool operator()(const ExprPtr& a, const ExprPtr& b) const { return expr_compare(a, b) < 0; }
};

/// Number of tree nodes.
std::size_t expr_size(const ExprPtr& e);

/// Minimal-parenthesis rendering. parse(to_string(e)) is structurally
/// equal to e; `+` is left-associative, `.` right-associative, postfix
/// `*` binds tightest.
std::string to_string(const ExprPtr& e);

/// Parses the concrete grammar. Throws ParseError on malformed input.
ExprPtr parse(std::string_view text);

/// Like parse, but additionally accepts `_` as a context hole.
ExprPtr parse_context(std::string_view text);

}  // namespace rechart
