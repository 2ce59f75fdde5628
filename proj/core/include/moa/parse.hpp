#pragma once

#include <map>
#include <string>
#include <string_view>

#include "moa/expr.hpp"

namespace moa {

// Identifiers are declared out of band: each free name carries its shape
// (which may use the reserved symbol n).
using DeclTable = std::map<std::string, SymShape>;

// Parses the expression mini-grammar:
//
//   expr   := chain ;  chain := atom (binop chain)?     -- right-to-left
//   binop  := '+' | '-' | '*' | '/'
//   atom   := 'psi' '(' index ',' expr ')' | 'ip' '(' expr ',' expr ')'
//           | 'tr' atom | 'red' '(' expr ')' | ident | number | '(' expr ')'
//   index  := '<' (int | 'i' | 'i+1')* '>'
//
// Unparenthesized chains associate right to left with no precedence
// levels. Raises ParseError with the byte offset of the failure, or
// UnknownIdentifierError for names missing from the declarations.
ExprPtr parse_expr(std::string_view text, const DeclTable& decls);

// Parses a declaration dimension list such as "2,n" or "n,n" into a
// symbolic shape (used by the command line --decl flag).
SymShape parse_dims(std::string_view dims);

}  // namespace moa
