#include <sstream>

#include "pch/reduce.hpp"

namespace pch {

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

struct DimacsData {
  int num_vars = 0;
  int declared_clauses = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::vector<int>> e_blocks;  // existential quantifier lines
  std::vector<std::vector<int>> a_blocks;  // universal quantifier lines
  std::vector<std::pair<char, std::vector<int>>> quant_lines;  // in order
  std::vector<int> x_line;                                     // emajsat split
};

DimacsData parse_dimacs_common(const std::string& text) {
  DimacsData data;
  bool have_header = false;
  std::vector<int> pending;
  for (const auto& line : lines_of(text)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == '#') continue;
    if (first == "p") {
      std::string kind;
      if (!(ls >> kind >> data.num_vars >> data.declared_clauses) || kind != "cnf")
        throw PchError(ErrorCode::Syntax, "expected 'p cnf <vars> <clauses>'");
      have_header = true;
      continue;
    }
    if (first == "e" || first == "a" || first == "x") {
      std::vector<int> ids;
      int v;
      while (ls >> v && v != 0) ids.push_back(v);
      if (first == "x")
        data.x_line = ids;
      else
        data.quant_lines.emplace_back(first[0], ids);
      continue;
    }
    // clause literals, 0-terminated (may span, but we keep it line-based)
    std::istringstream again(line);
    int lit;
    while (again >> lit) {
      if (lit == 0) {
        data.clauses.push_back(pending);
        pending.clear();
      } else {
        pending.push_back(lit);
      }
    }
  }
  if (!pending.empty()) data.clauses.push_back(pending);
  if (!have_header) throw PchError(ErrorCode::Syntax, "missing 'p cnf' header");
  for (const auto& clause : data.clauses)
    for (int lit : clause)
      if (lit == 0 || std::abs(lit) > data.num_vars)
        throw PchError(ErrorCode::Syntax, "literal out of range: " + std::to_string(lit));
  return data;
}

PropPtr clause_to_prop(const std::vector<int>& clause, int offset_split) {
  PropPtr acc;
  for (int lit : clause) {
    PropPtr v = p_var(std::abs(lit) - 1 + 0 * offset_split);
    if (lit < 0) v = p_not(v);
    acc = acc ? p_or(acc, v) : v;
  }
  return acc;
}

}  // namespace

Cnf parse_dimacs(const std::string& text) {
  DimacsData data = parse_dimacs_common(text);
  return Cnf{data.num_vars, data.clauses};
}

EMajSatInstance parse_emajsat_dimacs(const std::string& text) {
  DimacsData data = parse_dimacs_common(text);
  if (data.x_line.empty())
    throw PchError(ErrorCode::Syntax,
                   "E-MajSat input needs an 'x <ids> 0' line naming the existential block");
  int n = static_cast<int>(data.x_line.size());
  for (int i = 0; i < n; ++i)
    if (data.x_line[i] != i + 1)
      throw PchError(ErrorCode::Syntax, "existential block must be variables 1..n");
  if (data.num_vars != 2 * n)
    throw PchError(ErrorCode::Syntax,
                   "E-MajSat instances use variables 1..n (x) and n+1..2n (y)");
  PropPtr phi;
  for (const auto& clause : data.clauses) {
    PropPtr c = clause_to_prop(clause, n);
    if (!c) throw PchError(ErrorCode::Syntax, "empty clause in E-MajSat input");
    phi = phi ? p_and(phi, c) : c;
  }
  if (!phi) phi = p_or(p_var(0), p_not(p_var(0)));  // empty CNF is a tautology
  return EMajSatInstance{n, phi};
}

Qbf parse_qdimacs(const std::string& text) {
  DimacsData data = parse_dimacs_common(text);
  Qbf qbf;
  std::vector<bool> quantified(data.num_vars + 1, false);
  for (const auto& [q, ids] : data.quant_lines)
    for (int v : ids) {
      if (v < 1 || v > data.num_vars)
        throw PchError(ErrorCode::Syntax, "quantified variable out of range");
      if (quantified[v]) throw PchError(ErrorCode::Syntax, "variable quantified twice");
      quantified[v] = true;
      qbf.prefix.emplace_back(q == 'a', v);
    }
  // Unquantified variables become outermost existentials.
  std::vector<std::pair<bool, int>> lead;
  for (int v = 1; v <= data.num_vars; ++v)
    if (!quantified[v]) lead.emplace_back(false, v);
  qbf.prefix.insert(qbf.prefix.begin(), lead.begin(), lead.end());
  qbf.matrix = Cnf{data.num_vars, data.clauses};
  return qbf;
}

// ---------------------------------------------------------------------------
// Minimal EPR sentence grammar.

namespace {

struct EprParser {
  std::string src;
  std::size_t pos = 0;

  void skip() {
    while (pos < src.size() && isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < src.size() &&
           (isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' || src[pos] == '\''))
      ++pos;
    if (start == pos)
      throw PchError(ErrorCode::Syntax, "expected identifier at offset " + std::to_string(pos));
    return src.substr(start, pos - start);
  }

  bool peek_word(const std::string& w) {
    skip();
    if (src.compare(pos, w.size(), w) != 0) return false;
    std::size_t after = pos + w.size();
    if (after < src.size() &&
        (isalnum(static_cast<unsigned char>(src[after])) || src[after] == '_'))
      return false;
    return true;
  }

  void expect_word(const std::string& w) {
    if (!peek_word(w))
      throw PchError(ErrorCode::Syntax, "expected '" + w + "' at offset " + std::to_string(pos));
    pos += w.size();
  }

  std::vector<std::string> var_list() {
    std::vector<std::string> out;
    while (true) {
      skip();
      if (pos < src.size() && src[pos] == '.') {
        ++pos;
        break;
      }
      out.push_back(ident());
    }
    if (out.empty()) throw PchError(ErrorCode::Syntax, "empty quantifier block");
    return out;
  }

  EprPtr expr() {
    EprPtr lhs = conj();
    while (eat('|')) lhs = epr_or(lhs, conj());
    return lhs;
  }

  EprPtr conj() {
    EprPtr lhs = unary();
    while (eat('&')) lhs = epr_and(lhs, unary());
    return lhs;
  }

  EprPtr unary() {
    skip();
    if (eat('!')) return epr_not(unary());
    if (eat('(')) {
      EprPtr inner = expr();
      if (!eat(')')) throw PchError(ErrorCode::Syntax, "expected ')'");
      return inner;
    }
    std::string name = ident();
    skip();
    if (eat('(')) {
      std::vector<std::string> args;
      args.push_back(ident());
      while (eat(',')) args.push_back(ident());
      if (!eat(')')) throw PchError(ErrorCode::Syntax, "expected ')' after relation arguments");
      return epr_rel(name, std::move(args));
    }
    if (eat('=')) return epr_equal(name, ident());
    throw PchError(ErrorCode::Syntax, "expected relation atom or equality near '" + name + "'");
  }

  EprSentence sentence() {
    EprSentence s;
    if (peek_word("exists")) {
      pos += 6;
      s.exists_vars = var_list();
    }
    if (peek_word("forall")) {
      pos += 6;
      s.forall_vars = var_list();
    }
    s.matrix = expr();
    skip();
    if (pos != src.size())
      throw PchError(ErrorCode::Syntax, "trailing input at offset " + std::to_string(pos));
    return s;
  }
};

}  // namespace

EprSentence parse_epr(const std::string& text) {
  std::string stripped;
  for (const auto& line : lines_of(text)) {
    auto hash = line.find('#');
    stripped += hash == std::string::npos ? line : line.substr(0, hash);
    stripped += '\n';
  }
  EprParser p{stripped};
  return p.sentence();
}

}  // namespace pch
