#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "qsocount/error.hpp"
#include "qsocount/syntax.hpp"

namespace qsocount {

namespace {

enum class Tok {
  Ident, Int, Dot, Colon, Plus, LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Bar, Semi, Comma, Tilde, Amp, Equals, Arrow, End,
  // keywords
  Sum, SumFo, Exists, Forall, Top, Bot, Pivar, Rhpi1, Count,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Plus: return "'+'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Bar: return "'|'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Equals: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
    case Tok::Sum: return "'sum'";
    case Tok::SumFo: return "'sumfo'";
    case Tok::Exists: return "'exists'";
    case Tok::Forall: return "'forall'";
    case Tok::Top: return "'top'";
    case Tok::Bot: return "'bot'";
    case Tok::Pivar: return "'pivar'";
    case Tok::Rhpi1: return "'rhpi1'";
    case Tok::Count: return "'count'";
  }
  return "token";
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    auto simple = [&](Tok t, std::size_t len) {
      out.push_back({t, std::string(text.substr(i, len)), l, cl});
      advance(len);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string word(text.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "sum") kind = Tok::Sum;
      else if (word == "sumfo") kind = Tok::SumFo;
      else if (word == "exists") kind = Tok::Exists;
      else if (word == "forall") kind = Tok::Forall;
      else if (word == "top") kind = Tok::Top;
      else if (word == "bot") kind = Tok::Bot;
      else if (word == "pivar") kind = Tok::Pivar;
      else if (word == "rhpi1") kind = Tok::Rhpi1;
      else if (word == "count") kind = Tok::Count;
      simple(kind, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      simple(Tok::Int, j - i);
      continue;
    }
    switch (c) {
      case '.': simple(Tok::Dot, 1); break;
      case ':': simple(Tok::Colon, 1); break;
      case '+': simple(Tok::Plus, 1); break;
      case '(': simple(Tok::LParen, 1); break;
      case ')': simple(Tok::RParen, 1); break;
      case '[': simple(Tok::LBracket, 1); break;
      case ']': simple(Tok::RBracket, 1); break;
      case '{': simple(Tok::LBrace, 1); break;
      case '}': simple(Tok::RBrace, 1); break;
      case '|': simple(Tok::Bar, 1); break;
      case ';': simple(Tok::Semi, 1); break;
      case ',': simple(Tok::Comma, 1); break;
      case '~': simple(Tok::Tilde, 1); break;
      case '&': simple(Tok::Amp, 1); break;
      case '=': simple(Tok::Equals, 1); break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          simple(Tok::Arrow, 2);
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError("logic.syntax", std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocabulary) : tokens_(lex(text)), vocab_(vocabulary) {}

  Fo parse_fo_only() {
    Fo f = fo();
    expect(Tok::End);
    return f;
  }

  Qso parse_qso_only() {
    Qso q = qso();
    expect(Tok::End);
    return q;
  }

  Pi2Spec parse_pi2_only() {
    const Token& start = peek();
    expect(Tok::Pivar);
    Pi2Spec spec;
    spec.so_var = so_decl();
    expect(Tok::Dot);
    expect(Tok::Forall);
    spec.forall_vars = ident_list();
    expect(Tok::Dot);
    expect(Tok::Exists);
    spec.exists_vars = ident_list();
    expect(Tok::Dot);
    expect(Tok::LBrace);
    spec.fo_part = fo();
    expect(Tok::RBrace);
    expect(Tok::Amp);
    const Token& lit_tok = peek();
    SoLiteral lit = so_literal();
    expect(Tok::End);
    if (!lit.positive || lit.var != spec.so_var.name || lit.args != spec.exists_vars)
      fail("logic.shape", "matrix must end with " + spec.so_var.name +
                              " applied positively to the existential variables in order",
           lit_tok);
    wrap(start, [&] { validate_pi2(spec); });
    return spec;
  }

  RhPi1Formula parse_rh_only() {
    const Token& start = peek();
    expect(Tok::Rhpi1);
    RhPi1Formula f;
    while (peek().kind == Tok::Ident) f.so_vars.push_back(so_decl());
    expect(Tok::Dot);
    expect(Tok::Count);
    f.fo_count_vars = ident_list();
    expect(Tok::Dot);
    expect(Tok::Forall);
    f.forall_vars = ident_list();
    expect(Tok::Dot);
    expect(Tok::LBracket);
    if (peek().kind != Tok::RBracket) {
      f.clauses.push_back(rh_clause());
      while (accept(Tok::Semi)) f.clauses.push_back(rh_clause());
    }
    expect(Tok::RBracket);
    expect(Tok::End);
    wrap(start, [&] { validate_rh(f); });
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& code, const std::string& msg, const Token& at) {
    throw ParseError(code, msg, at.line, at.column);
  }

  template <class F>
  void wrap(const Token& at, F&& body) {
    try {
      body();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.code(), e.what(), at.line, at.column);
    }
  }

  const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind)
      fail("logic.syntax", std::string("expected ") + describe(kind) + ", found " + describe(peek().kind) +
                               (peek().text.empty() ? "" : " '" + peek().text + "'"),
           peek());
    return next();
  }

  std::string ident() { return expect(Tok::Ident).text; }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    while (peek().kind == Tok::Ident) out.push_back(next().text);
    return out;
  }

  std::vector<std::string> arg_list() {
    expect(Tok::LParen);
    std::vector<std::string> args;
    if (peek().kind != Tok::RParen) {
      args.push_back(ident());
      while (accept(Tok::Comma)) args.push_back(ident());
    }
    expect(Tok::RParen);
    return args;
  }

  std::uint64_t integer() {
    const Token& t = expect(Tok::Int);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail("logic.syntax", "integer out of range", t);
    return v;
  }

  SoVarDecl so_decl() {
    const Token& name = expect(Tok::Ident);
    if (vocab_.contains(name.text))
      fail("logic.symbol_clash", "second-order variable '" + name.text + "' clashes with a relation symbol", name);
    expect(Tok::Colon);
    const Token& at = peek();
    std::uint64_t arity = integer();
    if (arity == 0 || arity > 16) fail("logic.arity", "second-order arity must be in 1..16", at);
    return {name.text, static_cast<unsigned>(arity)};
  }

  SoLiteral so_literal() {
    SoLiteral lit;
    lit.positive = !accept(Tok::Tilde);
    const Token& name = expect(Tok::Ident);
    if (vocab_.contains(name.text))
      fail("logic.symbol_clash",
           "'" + name.text + "' is a relation symbol; wrap first-order parts in { }", name);
    lit.var = name.text;
    lit.args = arg_list();
    return lit;
  }

  // ---- first-order ----

  Fo fo() {
    if (peek().kind == Tok::Exists || peek().kind == Tok::Forall) return quantifier();
    return implication();
  }

  Fo quantifier() {
    bool universal = next().kind == Tok::Forall;
    std::vector<std::string> vars;
    vars.push_back(ident());
    while (peek().kind == Tok::Ident) vars.push_back(next().text);
    expect(Tok::Dot);
    Fo body = fo();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = universal ? fo::forall(*it, body) : fo::exists(*it, body);
    return body;
  }

  Fo implication() {
    Fo lhs = disjunction();
    if (accept(Tok::Arrow)) return fo::implies(lhs, fo());
    return lhs;
  }

  Fo disjunction() {
    Fo lhs = conjunction();
    while (accept(Tok::Bar)) lhs = fo::disj(lhs, conjunction());
    return lhs;
  }

  Fo conjunction() {
    Fo lhs = unary();
    while (accept(Tok::Amp)) lhs = fo::conj(lhs, unary());
    return lhs;
  }

  Fo unary() {
    if (accept(Tok::Tilde)) return fo::negate(unary());
    if (peek().kind == Tok::Exists || peek().kind == Tok::Forall) return quantifier();
    return primary();
  }

  Fo primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Top:
        next();
        return fo::top();
      case Tok::Bot:
        next();
        return fo::bottom();
      case Tok::LParen: {
        next();
        Fo inner = fo();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Ident: {
        next();
        if (accept(Tok::Equals)) return fo::eq(t.text, ident());
        if (peek().kind != Tok::LParen)
          fail("logic.syntax", "expected '(' or '=' after '" + t.text + "'", peek());
        const Symbol* sym = vocab_.find(t.text);
        if (!sym) fail("logic.unknown_symbol", "unknown relation symbol '" + t.text + "'", t);
        auto args = arg_list();
        if (args.size() != sym->arity)
          fail("logic.arity", "relation '" + t.text + "' has arity " + std::to_string(sym->arity) + " but got " +
                                  std::to_string(args.size()) + " arguments",
               t);
        return fo::atom(t.text, std::move(args));
      }
      default:
        fail("logic.syntax", std::string("expected a first-order formula, found ") + describe(t.kind), t);
    }
  }

  // ---- quantitative ----

  Qso qso() {
    Qso lhs = qterm();
    while (accept(Tok::Plus)) lhs = qso::plus(lhs, qterm());
    return lhs;
  }

  Qso qterm() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Sum: {
        next();
        SoVarDecl d = so_decl();
        expect(Tok::Dot);
        return qso::sum_so(d.name, d.arity, qterm());
      }
      case Tok::SumFo: {
        next();
        std::string v = ident();
        expect(Tok::Dot);
        return qso::sum_fo(v, qterm());
      }
      case Tok::Int:
        return qso::constant(integer());
      case Tok::LParen: {
        next();
        Qso inner = qso();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Exists:
        return qso::base(base());
      default:
        fail("logic.syntax", std::string("expected a quantitative formula, found ") + describe(t.kind), t);
    }
  }

  Sigma2TwoSatFormula base() {
    Sigma2TwoSatFormula f;
    expect(Tok::Exists);
    f.exists_vars = ident_list();
    expect(Tok::Dot);
    expect(Tok::Forall);
    f.forall_vars = ident_list();
    expect(Tok::Dot);
    expect(Tok::LBracket);
    if (peek().kind != Tok::RBracket) {
      f.clauses.push_back(clause());
      while (accept(Tok::Semi)) f.clauses.push_back(clause());
    }
    expect(Tok::RBracket);
    return f;
  }

  ClauseEntry entry() {
    switch (peek().kind) {
      case Tok::Top:
        next();
        return fo::top();
      case Tok::Bot:
        next();
        return fo::bottom();
      case Tok::LBrace: {
        next();
        Fo f = fo();
        expect(Tok::RBrace);
        return f;
      }
      case Tok::Tilde:
      case Tok::Ident:
        return so_literal();
      default:
        fail("logic.syntax",
             std::string("expected a clause entry (literal, { formula }, top, bot), found ") +
                 describe(peek().kind),
             peek());
    }
  }

  TwoSatClause clause() {
    const Token& start = peek();
    TwoSatClause c{{entry(), fo::bottom(), fo::bottom()}};
    for (int k = 1; k < 3; ++k) {
      if (peek().kind != Tok::Bar)
        fail("logic.shape", "a clause has exactly three parts separated by '|'", peek());
      next();
      c.parts[static_cast<std::size_t>(k)] = entry();
    }
    if (peek().kind == Tok::Bar) fail("logic.shape", "a clause has exactly three parts separated by '|'", peek());
    wrap(start, [&] { validate_clause(c); });
    return c;
  }

  RhClause rh_clause() {
    RhClause c;
    auto one = [&] {
      const Token& at = peek();
      ClauseEntry e = entry();
      if (auto* lit = std::get_if<SoLiteral>(&e)) {
        auto& bucket = lit->positive ? c.pos_so : c.neg_so;
        if (!bucket.empty())
          fail("logic.shape",
               std::string("restricted-Horn clause has more than one ") +
                   (lit->positive ? "unnegated" : "negated") + " second-order literal",
               at);
        bucket.push_back(*lit);
      } else {
        Fo f = std::get<Fo>(e);
        if (!is_literal(f)) fail("logic.shape", "restricted-Horn clause entry is not a literal", at);
        c.fo_literals.push_back(f);
      }
    };
    one();
    while (accept(Tok::Bar)) one();
    return c;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Vocabulary& vocab_;
};

}  // namespace

Fo parse_fo(std::string_view text, const Vocabulary& vocabulary) {
  return Parser(text, vocabulary).parse_fo_only();
}

Qso parse_qso(std::string_view text, const Vocabulary& vocabulary) {
  Qso q = Parser(text, vocabulary).parse_qso_only();
  try {
    check_binding_discipline(q);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.code(), e.what(), 1);
  }
  return q;
}

Pi2Spec parse_pi2(std::string_view text, const Vocabulary& vocabulary) {
  return Parser(text, vocabulary).parse_pi2_only();
}

RhPi1Formula parse_rh(std::string_view text, const Vocabulary& vocabulary) {
  return Parser(text, vocabulary).parse_rh_only();
}

AnyFormula parse_formula(std::string_view text, FormulaKind kind, const Vocabulary& vocabulary) {
  switch (kind) {
    case FormulaKind::Fo: return parse_fo(text, vocabulary);
    case FormulaKind::Qso: return parse_qso(text, vocabulary);
    case FormulaKind::Pi2: return parse_pi2(text, vocabulary);
    case FormulaKind::Rh: return parse_rh(text, vocabulary);
  }
  throw Error("logic.syntax", "unknown formula kind");
}

}  // namespace qsocount
