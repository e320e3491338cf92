#include "rechart/semantics.hpp"

#include <deque>
#include <map>
#include <stdexcept>

#include "rechart/errors.hpp"

namespace rechart {

namespace {

[[noreturn]] void reject_hole() {
  throw std::invalid_argument("context holes have no process semantics");
}

}  // namespace

int tm(const ExprPtr& e) {
  switch (e->kind()) {
    case ExprKind::zero:
      return 0;
    case ExprKind::one:
      return 1;
    case ExprKind::act:
      return 0;
    case ExprKind::sum:
      return std::max(tm(e->left()), tm(e->right()));
    case ExprKind::prod:
      return std::min(tm(e->left()), tm(e->right()));
    case ExprKind::star:
      return 1;
    case ExprKind::hole:
      reject_hole();
  }
  return 0;
}

bool ewp(const ExprPtr& e) { return tm(e) == 1; }

std::vector<ExprPtr> deriv(const std::string& letter, const ExprPtr& e) {
  std::set<ExprPtr, ExprLess> out;
  switch (e->kind()) {
    case ExprKind::zero:
    case ExprKind::one:
      break;
    case ExprKind::act:
      if (e->letter() == letter) out.insert(one());
      break;
    case ExprKind::sum:
      for (auto& d : deriv(letter, e->left())) out.insert(d);
      for (auto& d : deriv(letter, e->right())) out.insert(d);
      break;
    case ExprKind::prod:
      for (auto& d : deriv(letter, e->left())) out.insert(prod(d, e->right()));
      if (tm(e->left()) == 1)
        for (auto& d : deriv(letter, e->right())) out.insert(d);
      break;
    case ExprKind::star:
      for (auto& d : deriv(letter, e->body())) out.insert(prod(d, e));
      break;
    case ExprKind::hole:
      reject_hole();
  }
  return {out.begin(), out.end()};
}

// --- proof search over the transition rules -------------------------------
//
// The goals ✓(e) and e -a-> e' are solved backwards: for each rule whose
// conclusion can match the goal term, the premises (always on strict
// subterms) are solved recursively. This enumeration is the oracle that
// the Antimirov-style deriv/tm recursions are tested against.

bool termination_by_rules(const ExprPtr& e) {
  switch (e->kind()) {
    case ExprKind::one:
      return true;  // axiom ✓(1)
    case ExprKind::star:
      return true;  // axiom ✓(e*)
    case ExprKind::sum:
      // ✓(e1) |- ✓(e1+e2)  and  ✓(e2) |- ✓(e1+e2)
      return termination_by_rules(e->left()) || termination_by_rules(e->right());
    case ExprKind::prod:
      // ✓(e1), ✓(e2) |- ✓(e1.e2)
      return termination_by_rules(e->left()) && termination_by_rules(e->right());
    case ExprKind::zero:
    case ExprKind::act:
      return false;  // no rule concludes ✓(0) or ✓(a)
    case ExprKind::hole:
      reject_hole();
  }
  return false;
}

namespace {

struct StepFactLess {
  bool operator()(const StepFact& a, const StepFact& b) const {
    if (a.label != b.label) return a.label < b.label;
    return expr_compare(a.target, b.target) < 0;
  }
};

void search_steps(const ExprPtr& e, std::set<StepFact, StepFactLess>& out) {
  switch (e->kind()) {
    case ExprKind::zero:
    case ExprKind::one:
      break;  // no rule applies
    case ExprKind::act:
      // axiom  a -a-> 1
      out.insert({e, e->letter(), one()});
      break;
    case ExprKind::sum: {
      // e_i -a-> e'  |-  e1+e2 -a-> e'
      std::set<StepFact, StepFactLess> sub;
      search_steps(e->left(), sub);
      search_steps(e->right(), sub);
      for (const auto& f : sub) out.insert({e, f.label, f.target});
      break;
    }
    case ExprKind::prod: {
      // e1 -a-> e1'  |-  e1.e2 -a-> e1'.e2
      std::set<StepFact, StepFactLess> left;
      search_steps(e->left(), left);
      for (const auto& f : left) out.insert({e, f.label, prod(f.target, e->right())});
      // ✓(e1), e2 -a-> e2'  |-  e1.e2 -a-> e2'
      if (termination_by_rules(e->left())) {
        std::set<StepFact, StepFactLess> right;
        search_steps(e->right(), right);
        for (const auto& f : right) out.insert({e, f.label, f.target});
      }
      break;
    }
    case ExprKind::star: {
      // e -a-> e'  |-  e* -a-> e'.e*
      std::set<StepFact, StepFactLess> sub;
      search_steps(e->body(), sub);
      for (const auto& f : sub) out.insert({e, f.label, prod(f.target, e)});
      break;
    }
    case ExprKind::hole:
      reject_hole();
  }
}

}  // namespace

std::vector<StepFact> steps_by_rules(const ExprPtr& e) {
  std::set<StepFact, StepFactLess> out;
  search_steps(e, out);
  return {out.begin(), out.end()};
}

std::set<std::string> alphabet_of(const ExprPtr& e) {
  std::set<std::string> out;
  switch (e->kind()) {
    case ExprKind::zero:
    case ExprKind::one:
    case ExprKind::hole:
      break;
    case ExprKind::act:
      out.insert(e->letter());
      break;
    case ExprKind::star:
      return alphabet_of(e->body());
    case ExprKind::sum:
    case ExprKind::prod: {
      out = alphabet_of(e->left());
      auto r = alphabet_of(e->right());
      out.insert(r.begin(), r.end());
      break;
    }
  }
  return out;
}

Chart chart_of(const ExprPtr& e, const ChartOfOptions& opts) {
  const std::set<std::string> alphabet = alphabet_of(e);

  // States are identified by their printed form, which is injective.
  std::map<std::string, ExprPtr> states;
  std::deque<ExprPtr> queue;
  std::set<Transition> transitions;
  std::set<std::string> terminating;

  const std::string start = to_string(e);
  states.emplace(start, e);
  queue.push_back(e);

  while (!queue.empty()) {
    ExprPtr s = queue.front();
    queue.pop_front();
    std::string sid = to_string(s);
    if (tm(s) == 1) terminating.insert(sid);
    for (const auto& a : alphabet) {
      for (const auto& target : deriv(a, s)) {
        std::string tid = to_string(target);
        if (states.emplace(tid, target).second) {
          if (states.size() > opts.max_states)
            throw ResourceError("chart construction exceeded " +
                                std::to_string(opts.max_states) + " states");
          queue.push_back(target);
        }
        transitions.insert({sid, a, tid});
      }
    }
  }

  std::set<std::string> vertices;
  for (const auto& [id, expr] : states) vertices.insert(id);
  return Chart(std::move(vertices), start, std::move(terminating), std::move(transitions));
}

namespace {

void collect_star_bodies(const ExprPtr& e, std::vector<ExprPtr>& out) {
  switch (e->kind()) {
    case ExprKind::zero:
    case ExprKind::one:
    case ExprKind::act:
    case ExprKind::hole:
      return;
    case ExprKind::star:
      out.push_back(e->body());
      collect_star_bodies(e->body(), out);
      return;
    case ExprKind::sum:
    case ExprKind::prod:
      collect_star_bodies(e->left(), out);
      collect_star_bodies(e->right(), out);
      return;
  }
}

}  // namespace

bool one_return_less(const ExprPtr& e) {
  std::vector<ExprPtr> bodies;
  collect_star_bodies(e, bodies);
  for (const auto& body : bodies) {
    Chart c = chart_of(body);
    // vertices from which a terminating vertex is reachable in >= 0 steps
    std::set<std::string> reaches_term = c.terminating();
    std::multimap<std::string, std::string> rev;
    for (const auto& t : c.transitions()) rev.emplace(t.to, t.from);
    std::deque<std::string> queue(reaches_term.begin(), reaches_term.end());
    while (!queue.empty()) {
      std::string v = queue.front();
      queue.pop_front();
      auto [lo, hi] = rev.equal_range(v);
      for (auto it = lo; it != hi; ++it)
        if (reaches_term.insert(it->second).second) queue.push_back(it->second);
    }
    for (const auto& p : c.terminating()) {
      for (const auto& t : c.out(p)) {
        if (reaches_term.count(t.to)) return false;  // proper step, terminates later
      }
    }
  }
  return true;
}

}  // namespace rechart
