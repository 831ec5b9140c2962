#pragma once

#include <string>

#include "pch/ast.hpp"
#include "pch/model.hpp"

namespace pch {

// A parsed .pch file: header signature plus one validated formula.
struct ParsedFormula {
  Signature sig;
  FormulaPtr formula;
};

// Parses `domain <c>; vars <X,...>; [unknowns <z,...>;]` followed by one
// formula. Validates against the declared signature. Lines starting with
// '#' are comments (the CLI writes `#!pch` provenance headers).
ParsedFormula parse_formula(const std::string& text);
ParsedFormula parse_formula_file(const std::string& path);

// Parses a formula body against an existing signature (no header).
FormulaPtr parse_formula_body(const std::string& text, Signature& sig);

// .scm model files (JSON, exact rational weight strings).
Scm parse_model(const std::string& text);
Scm parse_model_file(const std::string& path);

std::string print_model(const Scm& scm);
void write_model_file(const Scm& scm, const std::string& path);

// Round-trip printer: parse_formula_body(print_formula(f)) == f structurally.
std::string print_formula(const FormulaPtr& formula);
std::string print_term(const TermPtr& term);
std::string print_event(const EventPtr& event);

// Renders a full .pch file (header + formula).
std::string print_formula_file(const Signature& sig, const FormulaPtr& formula,
                               const std::string& provenance = "");

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pch
