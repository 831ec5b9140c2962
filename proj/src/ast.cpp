#include "pch/ast.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pch {

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

Rat rat_from_string(const std::string& text) {
  auto bad = [&] { throw std::invalid_argument("not a rational: '" + text + "'"); };
  std::string num = text, den = "1";
  if (auto slash = text.find('/'); slash != std::string::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  auto check_int = [&](const std::string& s) {
    if (s.empty()) bad();
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) bad();
    for (; i < s.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(s[i]))) bad();
  };
  check_int(num);
  check_int(den);
  Int d(den);
  if (d == 0) bad();
  return Rat(Int(num), d);
}

std::string span_to_string(const SourceSpan& s) {
  std::ostringstream os;
  os << s.line_begin << ":" << s.col_begin;
  if (s.line_end != s.line_begin || s.col_end != s.col_begin)
    os << "-" << s.line_end << ":" << s.col_end;
  return os.str();
}

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::UnboundDummy: return "UnboundDummy";
    case ErrorCode::InconsistentIntervention: return "InconsistentIntervention";
    case ErrorCode::NonPropositionalCondition: return "NonPropositionalCondition";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::WeightSumNotOne: return "WeightSumNotOne";
    case ErrorCode::NonRecursiveMechanism: return "NonRecursiveMechanism";
    case ErrorCode::IncompleteTable: return "IncompleteTable";
    case ErrorCode::DuplicateAssignment: return "DuplicateAssignment";
    case ErrorCode::FragmentError: return "FragmentError";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Internal: return "InternalError";
  }
  return "Error";
}

std::string PchError::format(ErrorCode code, const std::string& msg, const SourceSpan& span) {
  std::string out = error_code_name(code);
  out += ": ";
  out += msg;
  if (span.valid()) {
    out += " (at ";
    out += span_to_string(span);
    out += ")";
  }
  return out;
}

int Signature::var_index(const std::string& name) const {
  auto it = std::find(endogenous.begin(), endogenous.end(), name);
  return it == endogenous.end() ? -1 : static_cast<int>(it - endogenous.begin());
}

bool Signature::is_unknown(const std::string& name) const {
  return std::find(unknowns.begin(), unknowns.end(), name) != unknowns.end();
}

void Signature::check() const {
  if (domain_size < 2)
    throw PchError(ErrorCode::DomainError, "domain size must be at least 2");
  std::set<std::string> seen;
  for (const auto& v : endogenous)
    if (!seen.insert(v).second)
      throw PchError(ErrorCode::DuplicateName, "duplicate variable '" + v + "'");
  for (const auto& d : dummies) {
    if (seen.count(d))
      throw PchError(ErrorCode::DuplicateName,
                     "dummy '" + d + "' collides with a variable name");
  }
  std::set<std::string> useen;
  for (const auto& u : unknowns) {
    if (seen.count(u))
      throw PchError(ErrorCode::DuplicateName,
                     "unknown '" + u + "' collides with a variable name");
    if (!useen.insert(u).second)
      throw PchError(ErrorCode::DuplicateName, "duplicate unknown '" + u + "'");
  }
}

EventPtr ev_true() {
  static const EventPtr t = std::make_shared<Event>(Event{Event::Kind::True, {}, {}, {}, {}, {}, {}, {}});
  return t;
}

EventPtr ev_atom(std::string var, ValueRef value, SourceSpan span) {
  auto e = std::make_shared<Event>();
  e->kind = Event::Kind::Atom;
  e->var = std::move(var);
  e->value = std::move(value);
  e->span = span;
  return e;
}

EventPtr ev_atom(std::string var, int value) {
  return ev_atom(std::move(var), ValueRef::constant(value));
}

EventPtr ev_not(EventPtr body, SourceSpan span) {
  auto e = std::make_shared<Event>();
  e->kind = Event::Kind::Not;
  e->child = std::move(body);
  e->span = span;
  return e;
}

EventPtr ev_and(EventPtr a, EventPtr b, SourceSpan span) {
  auto e = std::make_shared<Event>();
  e->kind = Event::Kind::And;
  e->left = std::move(a);
  e->right = std::move(b);
  e->span = span;
  return e;
}

EventPtr ev_or(EventPtr a, EventPtr b, SourceSpan span) {
  return ev_not(ev_and(ev_not(std::move(a)), ev_not(std::move(b)), span), span);
}

EventPtr ev_post_int(Intervention alpha, EventPtr body, SourceSpan span) {
  auto e = std::make_shared<Event>();
  e->kind = Event::Kind::PostInt;
  e->intervention = std::move(alpha);
  e->child = std::move(body);
  e->span = span;
  return e;
}

TermPtr t_prob(EventPtr ev, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Prob;
  t->event = std::move(ev);
  t->span = span;
  return t;
}

TermPtr t_cond(EventPtr ev, EventPtr given, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::CondProb;
  t->event = std::move(ev);
  t->condition = std::move(given);
  t->span = span;
  return t;
}

TermPtr t_sum(std::string dummy, TermPtr body, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Sum;
  t->dummy = std::move(dummy);
  t->left = std::move(body);
  t->span = span;
  return t;
}

TermPtr t_add(TermPtr a, TermPtr b, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Add;
  t->left = std::move(a);
  t->right = std::move(b);
  t->span = span;
  return t;
}

TermPtr t_neg(TermPtr a, SourceSpan span) {
  // Negated literals are negative constants; keeps printing canonical.
  if (a->kind == Term::Kind::Const) return t_const(-a->value, span);
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Neg;
  t->left = std::move(a);
  t->span = span;
  return t;
}

TermPtr t_mul(TermPtr a, TermPtr b, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Mul;
  t->left = std::move(a);
  t->right = std::move(b);
  t->span = span;
  return t;
}

TermPtr t_const(Rat v, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Const;
  t->value = std::move(v);
  t->span = span;
  return t;
}

TermPtr t_unknown(std::string name, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Unknown;
  t->unknown_name = std::move(name);
  t->span = span;
  return t;
}

FormulaPtr f_cmp(Formula::Kind kind, TermPtr a, TermPtr b, SourceSpan span) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->tl = std::move(a);
  f->tr = std::move(b);
  f->span = span;
  return f;
}

FormulaPtr f_le(TermPtr a, TermPtr b) { return f_cmp(Formula::Kind::Le, std::move(a), std::move(b)); }
FormulaPtr f_eq(TermPtr a, TermPtr b) { return f_cmp(Formula::Kind::Eq, std::move(a), std::move(b)); }

FormulaPtr f_not(FormulaPtr a, SourceSpan span) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Not;
  f->left = std::move(a);
  f->span = span;
  return f;
}

static FormulaPtr f_bin(Formula::Kind kind, FormulaPtr a, FormulaPtr b, SourceSpan span) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->left = std::move(a);
  f->right = std::move(b);
  f->span = span;
  return f;
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b, SourceSpan span) {
  return f_bin(Formula::Kind::And, std::move(a), std::move(b), span);
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b, SourceSpan span) {
  return f_bin(Formula::Kind::Or, std::move(a), std::move(b), span);
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b, SourceSpan span) {
  return f_bin(Formula::Kind::Implies, std::move(a), std::move(b), span);
}

FormulaPtr f_and_all(std::vector<FormulaPtr> conjuncts) {
  if (conjuncts.empty())
    return f_le(t_prob(ev_true()), t_prob(ev_true()));
  FormulaPtr acc = conjuncts.front();
  for (std::size_t i = 1; i < conjuncts.size(); ++i) acc = f_and(acc, conjuncts[i]);
  return acc;
}

bool structurally_equal(const EventPtr& a, const EventPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Event::Kind::True:
      return true;
    case Event::Kind::Atom:
      return a->var == b->var && a->value == b->value;
    case Event::Kind::Not:
      return structurally_equal(a->child, b->child);
    case Event::Kind::And:
      return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
    case Event::Kind::PostInt:
      return a->intervention == b->intervention && structurally_equal(a->child, b->child);
  }
  return false;
}

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Prob:
      return structurally_equal(a->event, b->event);
    case Term::Kind::CondProb:
      return structurally_equal(a->event, b->event) &&
             structurally_equal(a->condition, b->condition);
    case Term::Kind::Sum:
      return a->dummy == b->dummy && structurally_equal(a->left, b->left);
    case Term::Kind::Add:
    case Term::Kind::Mul:
      return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
    case Term::Kind::Neg:
      return structurally_equal(a->left, b->left);
    case Term::Kind::Const:
      return a->value == b->value;
    case Term::Kind::Unknown:
      return a->unknown_name == b->unknown_name;
  }
  return false;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Le:
    case Formula::Kind::Lt:
    case Formula::Kind::Eq:
    case Formula::Kind::Ge:
    case Formula::Kind::Gt:
    case Formula::Kind::Ne:
      return structurally_equal(a->tl, b->tl) && structurally_equal(a->tr, b->tr);
    case Formula::Kind::Not:
      return structurally_equal(a->left, b->left);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
  }
  return false;
}

const char* terms_name(FragmentTag::Terms t) {
  switch (t) {
    case FragmentTag::Terms::Base: return "base";
    case FragmentTag::Terms::Lin: return "lin";
    case FragmentTag::Terms::Poly: return "poly";
  }
  return "?";
}

std::string fragment_to_string(const FragmentTag& tag) {
  std::string out = "L";
  out += std::to_string(tag.layer);
  out += " ";
  out += terms_name(tag.terms);
  if (tag.has_sigma) out += "<S>";
  return out;
}

}  // namespace pch
