#include <sstream>

#include "pch/parser.hpp"

namespace pch {

namespace {

// Precedence levels used for minimal parenthesization. An operand is
// parenthesized when its own level is below the level its context requires.
constexpr int kFImplies = 1, kFOr = 2, kFAnd = 3, kFNot = 4, kFCmp = 5;
constexpr int kTAdd = 1, kTMul = 2, kTNeg = 3, kTAtom = 4;
constexpr int kEAnd = 1, kEUnary = 2, kEAtom = 3;

int event_level(const Event& e) {
  switch (e.kind) {
    case Event::Kind::And: return kEAnd;
    case Event::Kind::Not:
    case Event::Kind::PostInt: return kEUnary;
    default: return kEAtom;
  }
}

void print_value(std::ostream& os, const ValueRef& v) {
  if (v.is_dummy())
    os << v.dummy;
  else
    os << v.value;
}

void print_event_at(std::ostream& os, const EventPtr& e, int min_level) {
  bool parens = event_level(*e) < min_level;
  if (parens) os << "(";
  switch (e->kind) {
    case Event::Kind::True:
      os << "T";
      break;
    case Event::Kind::Atom:
      os << e->var << "=";
      print_value(os, e->value);
      break;
    case Event::Kind::Not:
      os << "!";
      print_event_at(os, e->child, kEUnary);
      break;
    case Event::Kind::And:
      print_event_at(os, e->left, kEAnd);
      os << " & ";
      print_event_at(os, e->right, kEUnary);
      break;
    case Event::Kind::PostInt: {
      os << "[";
      bool first = true;
      for (const auto& [var, val] : e->intervention) {
        if (!first) os << ", ";
        first = false;
        os << var << "=";
        print_value(os, val);
      }
      os << "] ";
      print_event_at(os, e->child, kEUnary);
      break;
    }
  }
  if (parens) os << ")";
}

int term_level(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Add: return kTAdd;
    case Term::Kind::Mul: return kTMul;
    case Term::Kind::Neg: return kTNeg;
    case Term::Kind::Const: return t.value < 0 ? kTNeg : kTAtom;
    default: return kTAtom;
  }
}

void print_term_at(std::ostream& os, const TermPtr& t, int min_level) {
  bool parens = term_level(*t) < min_level;
  if (parens) os << "(";
  switch (t->kind) {
    case Term::Kind::Prob:
      os << "P(";
      print_event_at(os, t->event, kEAnd);
      os << ")";
      break;
    case Term::Kind::CondProb:
      os << "P(";
      print_event_at(os, t->event, kEAnd);
      os << " | ";
      print_event_at(os, t->condition, kEAnd);
      os << ")";
      break;
    case Term::Kind::Sum:
      os << "sum " << t->dummy << " { ";
      print_term_at(os, t->left, kTAdd);
      os << " }";
      break;
    case Term::Kind::Add:
      print_term_at(os, t->left, kTAdd);
      // a + -b renders as subtraction; the parser folds it back.
      if (t->right->kind == Term::Kind::Neg) {
        os << " - ";
        print_term_at(os, t->right->left, kTMul);
      } else if (t->right->kind == Term::Kind::Const && t->right->value < 0) {
        os << " - " << rat_to_string(-t->right->value);
      } else {
        os << " + ";
        print_term_at(os, t->right, kTMul);
      }
      break;
    case Term::Kind::Neg:
      os << "-";
      print_term_at(os, t->left, kTNeg);
      break;
    case Term::Kind::Mul:
      print_term_at(os, t->left, kTMul);
      os << " * ";
      print_term_at(os, t->right, kTNeg);
      break;
    case Term::Kind::Const:
      os << rat_to_string(t->value);
      break;
    case Term::Kind::Unknown:
      os << t->unknown_name;
      break;
  }
  if (parens) os << ")";
}

int formula_level(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Implies: return kFImplies;
    case Formula::Kind::Or: return kFOr;
    case Formula::Kind::And: return kFAnd;
    case Formula::Kind::Not: return kFNot;
    default: return kFCmp;
  }
}

const char* cmp_text(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Le: return " <= ";
    case Formula::Kind::Lt: return " < ";
    case Formula::Kind::Eq: return " = ";
    case Formula::Kind::Ge: return " >= ";
    case Formula::Kind::Gt: return " > ";
    case Formula::Kind::Ne: return " != ";
    default: return " ? ";
  }
}

void print_formula_at(std::ostream& os, const FormulaPtr& f, int min_level) {
  bool parens = formula_level(*f) < min_level;
  if (parens) os << "(";
  switch (f->kind) {
    case Formula::Kind::Not:
      os << "~";
      print_formula_at(os, f->left, kFNot);
      break;
    case Formula::Kind::And:
      print_formula_at(os, f->left, kFAnd);
      os << " && ";
      print_formula_at(os, f->right, kFNot);
      break;
    case Formula::Kind::Or:
      print_formula_at(os, f->left, kFOr);
      os << " || ";
      print_formula_at(os, f->right, kFAnd);
      break;
    case Formula::Kind::Implies:
      print_formula_at(os, f->left, kFOr);
      os << " -> ";
      print_formula_at(os, f->right, kFImplies);
      break;
    default:
      print_term_at(os, f->tl, kTAdd);
      os << cmp_text(f->kind);
      print_term_at(os, f->tr, kTAdd);
      break;
  }
  if (parens) os << ")";
}

}  // namespace

std::string print_event(const EventPtr& e) {
  std::ostringstream os;
  print_event_at(os, e, kEAnd);
  return os.str();
}

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  print_term_at(os, t, kTAdd);
  return os.str();
}

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  print_formula_at(os, f, kFImplies);
  return os.str();
}

std::string print_formula_file(const Signature& sig, const FormulaPtr& formula,
                               const std::string& provenance) {
  std::ostringstream os;
  if (!provenance.empty()) os << "#!pch " << provenance << "\n";
  os << "domain " << sig.domain_size << "; vars ";
  for (std::size_t i = 0; i < sig.endogenous.size(); ++i) {
    if (i) os << ",";
    os << sig.endogenous[i];
  }
  os << ";";
  if (!sig.unknowns.empty()) {
    os << " unknowns ";
    for (std::size_t i = 0; i < sig.unknowns.size(); ++i) {
      if (i) os << ",";
      os << sig.unknowns[i];
    }
    os << ";";
  }
  os << "\n" << print_formula(formula) << "\n";
  return os.str();
}

}  // namespace pch
