#include "rechart/regexp.hpp"

#include <cctype>
#include <stdexcept>

#include "rechart/errors.hpp"

namespace rechart {

namespace {

bool letter_start(char c) { return c >= 'a' && c <= 'z'; }

bool letter_tail(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

bool is_letter(std::string_view text) {
  if (text.empty() || !letter_start(text[0])) return false;
  for (std::size_t i = 1; i < text.size(); ++i)
    if (!letter_tail(text[i])) return false;
  return true;
}

ExprPtr zero() {
  static const ExprPtr e = std::make_shared<Expr>(ExprKind::zero, "", nullptr, nullptr);
  return e;
}

ExprPtr one() {
  static const ExprPtr e = std::make_shared<Expr>(ExprKind::one, "", nullptr, nullptr);
  return e;
}

ExprPtr hole() {
  static const ExprPtr e = std::make_shared<Expr>(ExprKind::hole, "", nullptr, nullptr);
  return e;
}

ExprPtr act(std::string letter) {
  if (!is_letter(letter)) throw std::invalid_argument("invalid action name: '" + letter + "'");
  return std::make_shared<Expr>(ExprKind::act, std::move(letter), nullptr, nullptr);
}

ExprPtr sum(ExprPtr left, ExprPtr right) {
  if (!left || !right) throw std::invalid_argument("sum of null expression");
  return std::make_shared<Expr>(ExprKind::sum, "", std::move(left), std::move(right));
}

ExprPtr prod(ExprPtr left, ExprPtr right) {
  if (!left || !right) throw std::invalid_argument("prod of null expression");
  return std::make_shared<Expr>(ExprKind::prod, "", std::move(left), std::move(right));
}

ExprPtr star(ExprPtr body) {
  if (!body) throw std::invalid_argument("star of null expression");
  return std::make_shared<Expr>(ExprKind::star, "", std::move(body), nullptr);
}

int expr_compare(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return 0;
  auto ka = static_cast<int>(a->kind());
  auto kb = static_cast<int>(b->kind());
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (a->kind()) {
    case ExprKind::zero:
    case ExprKind::one:
    case ExprKind::hole:
      return 0;
    case ExprKind::act:
      return a->letter().compare(b->letter()) < 0   ? -1
             : a->letter().compare(b->letter()) > 0 ? 1
                                                    : 0;
    case ExprKind::star:
      return expr_compare(a->body(), b->body());
    case ExprKind::sum:
    case ExprKind::prod: {
      int c = expr_compare(a->left(), b->left());
      return c != 0 ? c : expr_compare(a->right(), b->right());
    }
  }
  return 0;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) { return expr_compare(a, b) == 0; }

std::size_t expr_size(const ExprPtr& e) {
  switch (e->kind()) {
    case ExprKind::zero:
    case ExprKind::one:
    case ExprKind::act:
    case ExprKind::hole:
      return 1;
    case ExprKind::star:
      return 1 + expr_size(e->body());
    case ExprKind::sum:
    case ExprKind::prod:
      return 1 + expr_size(e->left()) + expr_size(e->right());
  }
  return 1;
}

namespace {

// precedence: sum = 1, prod = 2, star = 3, atoms = 4
void render(const ExprPtr& e, int min_prec, std::string& out) {
  switch (e->kind()) {
    case ExprKind::zero:
      out += '0';
      return;
    case ExprKind::one:
      out += '1';
      return;
    case ExprKind::hole:
      out += '_';
      return;
    case ExprKind::act:
      out += e->letter();
      return;
    case ExprKind::star:
      render(e->body(), 3, out);
      out += '*';
      return;
    case ExprKind::prod: {
      bool wrap = min_prec > 2;
      if (wrap) out += '(';
      render(e->left(), 3, out);
      out += '.';
      render(e->right(), 2, out);
      if (wrap) out += ')';
      return;
    }
    case ExprKind::sum: {
      bool wrap = min_prec > 1;
      if (wrap) out += '(';
      render(e->left(), 1, out);
      out += '+';
      render(e->right(), 2, out);
      if (wrap) out += ')';
      return;
    }
  }
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  bool allow_hole = false;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos); }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    ExprPtr left = parse_prod();
    while (eat('+')) left = sum(std::move(left), parse_prod());
    return left;
  }

  // right-associative: a.b.c parses as a.(b.c)
  ExprPtr parse_prod() {
    ExprPtr left = parse_postfix();
    if (eat('.')) return prod(std::move(left), parse_prod());
    return left;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (eat('*')) e = star(std::move(e));
    return e;
  }

  ExprPtr parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '0') {
      ++pos;
      return zero();
    }
    if (c == '1') {
      ++pos;
      return one();
    }
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_sum();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      ++pos;
      return e;
    }
    if (allow_hole && c == '_') {
      ++pos;
      return hole();
    }
    if (letter_start(c)) {
      std::size_t begin = pos++;
      while (pos < text.size() && letter_tail(text[pos])) ++pos;
      return act(std::string(text.substr(begin, pos - begin)));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr run() {
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return e;
  }
};

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::string out;
  render(e, 1, out);
  return out;
}

ExprPtr parse(std::string_view text) {
  Parser p{text, 0, false};
  return p.run();
}

ExprPtr parse_context(std::string_view text) {
  Parser p{text, 0, true};
  return p.run();
}

}  // namespace rechart
