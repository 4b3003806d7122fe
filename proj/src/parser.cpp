#include "bstc/parser.hpp"

#include <cctype>

namespace bstc {

std::string ParseError::format() const {
  std::string out = "parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                    ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

namespace {

enum class Tok {
  End,
  Ident,     // carries text; case of first char decides the sort
  Zero,      // 0
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Plus,
  Amp,
  Minus,
  Eq,
  Neq,
  Arrow,
  DArrow,
  KwSub,
  KwIn,
  KwNotin,
  KwNot,
  KwAnd,
  KwOr,
  KwChoice,  // the identifier `c`
};

struct Token {
  Tok tok;
  std::string text;
  int line;
  int column;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Zero: return "'0'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::Amp: return "'&'";
    case Tok::Minus: return "'-'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::KwSub: return "'sub'";
    case Tok::KwIn: return "'in'";
    case Tok::KwNotin: return "'notin'";
    case Tok::KwNot: return "'not'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwChoice: return "'c'";
  }
  return "?";
}

struct LexFail {
  ParseError err;
};

std::vector<Token> lex(const std::string& src, ParseError& err, bool& failed) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  failed = false;
  while (i < src.size()) {
    char ch = src[i];
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    int tl = line, tc = col;
    auto push = [&](Tok t, size_t len, std::string text = {}) {
      out.push_back(Token{t, std::move(text), tl, tc});
      advance(len);
    };
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      Tok t = Tok::Ident;
      if (word == "not") t = Tok::KwNot;
      else if (word == "and") t = Tok::KwAnd;
      else if (word == "or") t = Tok::KwOr;
      else if (word == "sub") t = Tok::KwSub;
      else if (word == "in") t = Tok::KwIn;
      else if (word == "notin") t = Tok::KwNotin;
      else if (word == "c") t = Tok::KwChoice;
      if (t == Tok::Ident && word.find("__flat") != std::string::npos) {
        err = ParseError{tl, tc, "identifier '" + word + "' uses the reserved marker '__flat'", {}};
        failed = true;
        return out;
      }
      push(t, word.size(), word);
      continue;
    }
    switch (ch) {
      case '0': push(Tok::Zero, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '&': push(Tok::Amp, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '!':
        if (i + 1 < src.size() && src[i + 1] == '=') {
          push(Tok::Neq, 2);
          continue;
        }
        break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          push(Tok::Arrow, 2);
          continue;
        }
        push(Tok::Minus, 1);
        continue;
      case '<':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
          push(Tok::DArrow, 3);
          continue;
        }
        break;
      default:
        break;
    }
    err = ParseError{tl, tc, std::string("unexpected character '") + ch + "'", {}};
    failed = true;
    return out;
  }
  out.push_back(Token{Tok::End, {}, line, col});
  return out;
}

bool is_individual_name(const std::string& name) {
  return !name.empty() && std::islower(static_cast<unsigned char>(name[0]));
}

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParseResult run() {
    try {
      Formula f = parse_formula_node();
      expect_end();
      return ParseResult{f, std::nullopt};
    } catch (const LexFail& fail) {
      return ParseResult{std::nullopt, fail.err};
    }
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t p = pos_ + ahead;
    if (p >= toks_.size()) p = toks_.size() - 1;
    return toks_[p];
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok t) const { return peek().tok == t; }
  bool accept(Tok t) {
    if (!at(t)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(std::string msg, std::vector<std::string> expected = {}) const {
    const Token& t = peek();
    throw LexFail{ParseError{t.line, t.column, std::move(msg), std::move(expected)}};
  }
  Token expect(Tok t) {
    if (!at(t)) fail(std::string("found ") + tok_name(peek().tok), {tok_name(t)});
    return take();
  }
  void expect_end() {
    if (!at(Tok::End))
      fail(std::string("trailing input starting with ") + tok_name(peek().tok),
           {"end of input"});
  }

  // A '(' is ambiguous between a parenthesized formula and a parenthesized
  // set term. Resolve by looking at the token after the matching ')'.
  bool paren_opens_term() const {
    int depth = 0;
    size_t p = pos_;
    for (; p < toks_.size(); ++p) {
      if (toks_[p].tok == Tok::LParen) ++depth;
      else if (toks_[p].tok == Tok::RParen) {
        if (--depth == 0) break;
      } else if (toks_[p].tok == Tok::End) {
        return false;  // unbalanced; let the formula path report it
      }
    }
    if (p + 1 >= toks_.size()) return false;
    switch (toks_[p + 1].tok) {
      case Tok::Eq:
      case Tok::Neq:
      case Tok::KwSub:
      case Tok::Plus:
      case Tok::Amp:
      case Tok::Minus:
        return true;
      default:
        return false;
    }
  }

  Formula parse_formula_node() { return parse_iff(); }

  Formula parse_iff() {
    Formula lhs = parse_impl();
    while (accept(Tok::DArrow)) lhs = Formula::equivalence(lhs, parse_impl());
    return lhs;
  }

  Formula parse_impl() {
    Formula lhs = parse_disj();
    if (accept(Tok::Arrow)) return Formula::implication(lhs, parse_impl());
    return lhs;
  }

  Formula parse_disj() {
    Formula lhs = parse_conj();
    while (accept(Tok::KwOr)) lhs = Formula::disjunction(lhs, parse_conj());
    return lhs;
  }

  Formula parse_conj() {
    Formula lhs = parse_neg();
    while (accept(Tok::KwAnd)) lhs = Formula::conjunction(lhs, parse_neg());
    return lhs;
  }

  Formula parse_neg() {
    if (accept(Tok::KwNot)) return Formula::negation(parse_neg());
    if (at(Tok::LParen) && !paren_opens_term()) {
      take();
      Formula f = parse_formula_node();
      expect(Tok::RParen);
      return f;
    }
    return parse_atom();
  }

  Formula parse_atom() {
    // Individual-variable forms: x = y, x != y, x in T, x notin T.
    if (at(Tok::Ident) && is_individual_name(peek().text)) {
      std::string x = take().text;
      if (accept(Tok::Eq)) return Formula::atom(Atom{Relation::Equal, Term::singleton(x),
                                                     Term::singleton(expect_individual())});
      if (accept(Tok::Neq))
        return Formula::negation(Formula::atom(
            Atom{Relation::Equal, Term::singleton(x), Term::singleton(expect_individual())}));
      if (accept(Tok::KwIn))
        return Formula::atom(Atom{Relation::SubsetEq, Term::singleton(x), parse_term()});
      if (accept(Tok::KwNotin))
        return Formula::negation(
            Formula::atom(Atom{Relation::SubsetEq, Term::singleton(x), parse_term()}));
      fail(std::string("found ") + tok_name(peek().tok) + " after individual variable '" + x + "'",
           {"'='", "'!='", "'in'", "'notin'"});
    }
    Term lhs = parse_term();
    if (accept(Tok::Eq)) return Formula::atom(Atom{Relation::Equal, lhs, parse_term()});
    if (accept(Tok::Neq))
      return Formula::negation(Formula::atom(Atom{Relation::Equal, lhs, parse_term()}));
    if (accept(Tok::KwSub)) return Formula::atom(Atom{Relation::SubsetEq, lhs, parse_term()});
    fail(std::string("found ") + tok_name(peek().tok) + " after set term",
         {"'='", "'!='", "'sub'"});
  }

  std::string expect_individual() {
    if (!at(Tok::Ident) || !is_individual_name(peek().text))
      fail(std::string("found ") + tok_name(peek().tok), {"individual variable"});
    return take().text;
  }

  Term parse_term() {
    Term lhs = parse_prod();
    while (accept(Tok::Plus)) lhs = Term::union_of(lhs, parse_prod());
    return lhs;
  }

  Term parse_prod() {
    Term lhs = parse_prim();
    for (;;) {
      if (accept(Tok::Amp)) lhs = Term::intersection(lhs, parse_prim());
      else if (accept(Tok::Minus)) lhs = Term::difference(lhs, parse_prim());
      else return lhs;
    }
  }

  Term parse_prim() {
    if (accept(Tok::Zero)) return Term::empty();
    if (at(Tok::Ident)) {
      const Token& t = peek();
      if (is_individual_name(t.text))
        fail("individual variable '" + t.text + "' is not a set term",
             {"set variable", "'{'", "'c('", "'0'", "'('"});
      return Term::set_var(take().text);
    }
    if (accept(Tok::LBrace)) {
      // {x1,...,xk} desugars to {x1} + ... + {xk}, folded left.
      Term acc = Term::singleton(expect_individual());
      while (accept(Tok::Comma)) acc = Term::union_of(acc, Term::singleton(expect_individual()));
      expect(Tok::RBrace);
      return acc;
    }
    if (accept(Tok::KwChoice)) {
      expect(Tok::LParen);
      Term arg = parse_term();
      expect(Tok::RParen);
      return Term::choice(arg);
    }
    if (accept(Tok::LParen)) {
      Term t = parse_term();
      expect(Tok::RParen);
      return t;
    }
    fail(std::string("found ") + tok_name(peek().tok),
         {"set variable", "'{'", "'c('", "'0'", "'('"});
  }
};

}  // namespace

ParseResult parse_formula(const std::string& src) {
  ParseError lex_err;
  bool lex_failed = false;
  std::vector<Token> toks = lex(src, lex_err, lex_failed);
  if (lex_failed) return ParseResult{std::nullopt, lex_err};
  return Parser(std::move(toks)).run();
}

}  // namespace bstc
