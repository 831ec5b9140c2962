#include "pch/parser.hpp"

#include <fstream>
#include <sstream>

#include "pch/analysis.hpp"

namespace pch {

namespace {

enum class Tok {
  End, Ident, Number,
  Semi, Comma, LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Eq, Ne, Le, Lt, Ge, Gt,
  Amp, AmpAmp, Pipe, PipePipe, Bang, Tilde, Arrow,
  Plus, Minus, Star, Slash,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Le: return "'<='";
    case Tok::Lt: return "'<'";
    case Tok::Ge: return "'>='";
    case Tok::Gt: return "'>'";
    case Tok::Amp: return "'&'";
    case Tok::AmpAmp: return "'&&'";
    case Tok::Pipe: return "'|'";
    case Tok::PipePipe: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::Tilde: return "'~'";
    case Tok::Arrow: return "'->'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { tokenize(); }
  const std::vector<Token>& tokens() const { return toks_; }

 private:
  void tokenize() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
        continue;
      }
      start_ = pos_;
      start_line_ = line_;
      start_col_ = col_;
      if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() &&
               (isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '\''))
          advance();
        push(Tok::Ident);
        continue;
      }
      if (isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        push(Tok::Number);
        continue;
      }
      switch (c) {
        case ';': single(Tok::Semi); break;
        case ',': single(Tok::Comma); break;
        case '(': single(Tok::LParen); break;
        case ')': single(Tok::RParen); break;
        case '[': single(Tok::LBracket); break;
        case ']': single(Tok::RBracket); break;
        case '{': single(Tok::LBrace); break;
        case '}': single(Tok::RBrace); break;
        case '=': single(Tok::Eq); break;
        case '+': single(Tok::Plus); break;
        case '*': single(Tok::Star); break;
        case '/': single(Tok::Slash); break;
        case '~': single(Tok::Tilde); break;
        case '<': pair('=', Tok::Le, Tok::Lt); break;
        case '>': pair('=', Tok::Ge, Tok::Gt); break;
        case '!': pair('=', Tok::Ne, Tok::Bang); break;
        case '&': pair('&', Tok::AmpAmp, Tok::Amp); break;
        case '|': pair('|', Tok::PipePipe, Tok::Pipe); break;
        case '-': pair('>', Tok::Arrow, Tok::Minus); break;
        default:
          advance();
          throw PchError(ErrorCode::Syntax,
                         std::string("unexpected character '") + c + "'", span());
      }
    }
    start_ = pos_;
    start_line_ = line_;
    start_col_ = col_;
    push(Tok::End);
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void single(Tok t) {
    advance();
    push(t);
  }

  void pair(char second, Tok two, Tok one) {
    advance();
    if (pos_ < src_.size() && src_[pos_] == second) {
      advance();
      push(two);
    } else {
      push(one);
    }
  }

  SourceSpan span() const {
    SourceSpan s;
    s.byte_begin = start_;
    s.byte_end = pos_;
    s.line_begin = start_line_;
    s.col_begin = start_col_;
    s.line_end = line_;
    s.col_end = col_;
    return s;
  }

  void push(Tok t) { toks_.push_back({t, src_.substr(start_, pos_ - start_), span()}); }

  const std::string& src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0, start_ = 0;
  int line_ = 1, col_ = 1, start_line_ = 1, start_col_ = 1;
};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.byte_end = b.byte_end;
  s.line_end = b.line_end;
  s.col_end = b.col_end;
  return s;
}

class Parser {
 public:
  Parser(const std::string& src) : toks_(Lexer(src).tokens()) {}

  ParsedFormula file() {
    ParsedFormula out;
    out.sig = header();
    out.formula = formula();
    expect(Tok::End, "end of input after formula");
    validate(out.formula, out.sig);
    return out;
  }

  FormulaPtr body_only(Signature& sig) {
    auto f = formula();
    expect(Tok::End, "end of input after formula");
    validate(f, sig);
    return f;
  }

 private:
  // --- header -------------------------------------------------------------

  Signature header() {
    Signature sig;
    expect_keyword("domain");
    sig.domain_size = expect_int();
    expect(Tok::Semi, "';' after domain");
    expect_keyword("vars");
    sig.endogenous = ident_list();
    expect(Tok::Semi, "';' after variable list");
    if (peek().kind == Tok::Ident && peek().text == "unknowns") {
      next();
      sig.unknowns = ident_list();
      expect(Tok::Semi, "';' after unknowns list");
    }
    sig.check();
    return sig;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    out.push_back(expect_ident());
    while (peek().kind == Tok::Comma) {
      next();
      out.push_back(expect_ident());
    }
    return out;
  }

  // --- formulas -------------------------------------------------------------

  FormulaPtr formula() { return implies(); }

  FormulaPtr implies() {
    auto lhs = or_formula();
    if (peek().kind == Tok::Arrow) {
      next();
      auto rhs = implies();  // right associative
      return f_implies(lhs, rhs, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  FormulaPtr or_formula() {
    auto lhs = and_formula();
    while (peek().kind == Tok::PipePipe) {
      next();
      auto rhs = and_formula();
      lhs = f_or(lhs, rhs, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  FormulaPtr and_formula() {
    auto lhs = not_formula();
    while (peek().kind == Tok::AmpAmp) {
      next();
      auto rhs = not_formula();
      lhs = f_and(lhs, rhs, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  FormulaPtr not_formula() {
    if (peek().kind == Tok::Tilde) {
      auto start = next().span;
      auto body = not_formula();
      return f_not(body, join(start, body->span));
    }
    return atom_formula();
  }

  FormulaPtr atom_formula() {
    if (peek().kind == Tok::LParen) {
      // Either a parenthesized formula or a parenthesized term starting a
      // comparison; try the comparison first and fall back.
      std::size_t mark = pos_;
      try {
        return comparison();
      } catch (const PchError&) {
        pos_ = mark;
      }
      auto start = expect(Tok::LParen, "'('").span;
      auto inner = formula();
      auto end = expect(Tok::RParen, "')'").span;
      auto f = std::make_shared<Formula>(*inner);
      f->span = join(start, end);
      return f;
    }
    return comparison();
  }

  FormulaPtr comparison() {
    auto lhs = term();
    Formula::Kind kind;
    switch (peek().kind) {
      case Tok::Le: kind = Formula::Kind::Le; break;
      case Tok::Lt: kind = Formula::Kind::Lt; break;
      case Tok::Eq: kind = Formula::Kind::Eq; break;
      case Tok::Ge: kind = Formula::Kind::Ge; break;
      case Tok::Gt: kind = Formula::Kind::Gt; break;
      case Tok::Ne: kind = Formula::Kind::Ne; break;
      default:
        throw err("comparison operator");
    }
    next();
    auto rhs = term();
    return f_cmp(kind, lhs, rhs, join(lhs->span, rhs->span));
  }

  // --- terms ----------------------------------------------------------------

  TermPtr term() { return add_term(); }

  TermPtr add_term() {
    auto lhs = mul_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool plus = next().kind == Tok::Plus;
      auto rhs = mul_term();
      auto span = join(lhs->span, rhs->span);
      lhs = plus ? t_add(lhs, rhs, span) : t_add(lhs, t_neg(rhs, rhs->span), span);
    }
    return lhs;
  }

  TermPtr mul_term() {
    auto lhs = unary_term();
    while (peek().kind == Tok::Star) {
      next();
      auto rhs = unary_term();
      lhs = t_mul(lhs, rhs, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  TermPtr unary_term() {
    if (peek().kind == Tok::Minus) {
      auto start = next().span;
      auto body = unary_term();
      return t_neg(body, join(start, body->span));  // folds negated literals
    }
    return primary_term();
  }

  TermPtr primary_term() {
    const Token& tok = peek();
    if (tok.kind == Tok::Number) {
      next();
      Int num(tok.text);
      SourceSpan span = tok.span;
      Int den = 1;
      if (peek().kind == Tok::Slash) {
        next();
        const Token& d = expect(Tok::Number, "denominator");
        den = Int(d.text);
        if (den == 0) throw PchError(ErrorCode::Syntax, "zero denominator", d.span);
        span = join(span, d.span);
      }
      return t_const(Rat(num, den), span);
    }
    if (tok.kind == Tok::Ident && tok.text == "P") {
      return prob_term();
    }
    if (tok.kind == Tok::Ident && tok.text == "sum") {
      auto start = next().span;
      std::string dummy = expect_ident();
      expect(Tok::LBrace, "'{' after sum binder");
      auto body = term();
      auto end = expect(Tok::RBrace, "'}' closing sum").span;
      return t_sum(std::move(dummy), body, join(start, end));
    }
    if (tok.kind == Tok::Ident) {
      next();
      return t_unknown(tok.text, tok.span);
    }
    if (tok.kind == Tok::LParen) {
      auto start = next().span;
      auto inner = term();
      auto end = expect(Tok::RParen, "')'").span;
      auto t = std::make_shared<Term>(*inner);
      t->span = join(start, end);
      return t;
    }
    throw err("term");
  }

  TermPtr prob_term() {
    auto start = next().span;  // 'P'
    expect(Tok::LParen, "'(' after P");
    auto body = event_and();
    EventPtr condition;
    if (peek().kind == Tok::Pipe) {  // top-level '|' separates the condition
      next();
      condition = event_and();
    }
    auto end = expect(Tok::RParen, "')' closing P(...)").span;
    auto span = join(start, end);
    return condition ? t_cond(body, condition, span) : t_prob(body, span);
  }

  // --- events ---------------------------------------------------------------

  EventPtr event_or() {
    auto lhs = event_and();
    while (peek().kind == Tok::Pipe) {
      next();
      auto rhs = event_and();
      lhs = ev_or(lhs, rhs, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  EventPtr event_and() {
    auto lhs = event_unary();
    while (peek().kind == Tok::Amp) {
      next();
      auto rhs = event_unary();
      lhs = ev_and(lhs, rhs, join(lhs->span, rhs->span));
    }
    return lhs;
  }

  EventPtr event_unary() {
    const Token& tok = peek();
    if (tok.kind == Tok::Bang) {
      auto start = next().span;
      auto body = event_unary();
      return ev_not(body, join(start, body->span));
    }
    if (tok.kind == Tok::LBracket) {
      auto start = next().span;
      Intervention alpha;
      if (peek().kind != Tok::RBracket) {
        alpha.push_back(intervention_item());
        while (peek().kind == Tok::Comma) {
          next();
          alpha.push_back(intervention_item());
        }
      }
      expect(Tok::RBracket, "']' closing intervention");
      auto body = event_unary();
      return ev_post_int(std::move(alpha), body, join(start, body->span));
    }
    if (tok.kind == Tok::LParen) {
      auto start = next().span;
      auto inner = event_or();
      auto end = expect(Tok::RParen, "')'").span;
      auto e = std::make_shared<Event>(*inner);
      e->span = join(start, end);
      return e;
    }
    if (tok.kind == Tok::Ident) {
      // 'T' not followed by '=' is the trivially-true event.
      if (tok.text == "T" && toks_[pos_ + 1].kind != Tok::Eq) {
        next();
        auto e = std::make_shared<Event>(*ev_true());
        e->span = tok.span;
        return e;
      }
      next();
      expect(Tok::Eq, "'=' in atom");
      auto [value, vspan] = value_ref();
      return ev_atom(tok.text, value, join(tok.span, vspan));
    }
    throw err("event");
  }

  std::pair<std::string, ValueRef> intervention_item() {
    std::string var = expect_ident();
    expect(Tok::Eq, "'=' in intervention");
    return {std::move(var), value_ref().first};
  }

  std::pair<ValueRef, SourceSpan> value_ref() {
    const Token& tok = peek();
    if (tok.kind == Tok::Number) {
      next();
      return {ValueRef::constant(std::stoi(tok.text)), tok.span};
    }
    if (tok.kind == Tok::Ident) {
      next();
      return {ValueRef::of_dummy(tok.text), tok.span};
    }
    throw err("value or dummy");
  }

  // --- plumbing ---------------------------------------------------------------

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) throw err(what);
    return next();
  }

  void expect_keyword(const std::string& kw) {
    if (peek().kind != Tok::Ident || peek().text != kw) throw err("'" + kw + "'");
    next();
  }

  std::string expect_ident() {
    if (peek().kind != Tok::Ident) throw err("identifier");
    return next().text;
  }

  int expect_int() {
    if (peek().kind != Tok::Number) throw err("integer");
    return std::stoi(next().text);
  }

  PchError err(const std::string& expected) const {
    const Token& tok = peek();
    std::string got = tok.kind == Tok::Ident || tok.kind == Tok::Number
                          ? "'" + tok.text + "'"
                          : tok_name(tok.kind);
    return PchError(ErrorCode::Syntax, "expected " + expected + ", found " + got, tok.span);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedFormula parse_formula(const std::string& text) { return Parser(text).file(); }

ParsedFormula parse_formula_file(const std::string& path) {
  return parse_formula(read_text_file(path));
}

FormulaPtr parse_formula_body(const std::string& text, Signature& sig) {
  return Parser(text).body_only(sig);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PchError(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PchError(ErrorCode::Io, "cannot write '" + path + "'");
  out << content;
}

}  // namespace pch
