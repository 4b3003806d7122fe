#ifndef BSTC_PARSER_HPP
#define BSTC_PARSER_HPP

#include <optional>
#include <string>
#include <vector>

#include "bstc/ast.hpp"

namespace bstc {

struct ParseError {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  std::string message;
  std::vector<std::string> expected;

  std::string format() const;
};

struct ParseResult {
  std::optional<Formula> formula;
  std::optional<ParseError> error;

  bool ok() const { return formula.has_value(); }
};

// Parses the concrete `.bstc` grammar:
//
//   formula  := iff
//   iff      := impl ('<->' impl)*                    left-assoc
//   impl     := disj ('->' impl)?                     right-assoc
//   disj     := conj ('or' conj)*
//   conj     := neg ('and' neg)*
//   neg      := 'not' neg | '(' formula ')' | atom
//   atom     := ivar ('='|'!=') ivar
//             | ivar ('in'|'notin') term
//             | term ('='|'!='|'sub') term
//   term     := prod ('+' prod)*
//   prod     := prim (('&'|'-') prim)*
//   prim     := '0' | SETVAR | '{' ivar (',' ivar)* '}'
//             | 'c' '(' term ')' | '(' term ')'
//
// Set variables start uppercase, individual variables lowercase. `{x,y}`
// desugars to {x} + {y}, `x in T` to {x} sub T, `x = y` to {x} = {y},
// and `!=` / `notin` to negated atoms. `#` starts a line comment.
// Identifiers containing `__flat` are reserved for the normalizer.
ParseResult parse_formula(const std::string& src);

}  // namespace bstc

#endif
