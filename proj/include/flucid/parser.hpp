#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flucid/ast.hpp"
#include "flucid/token.hpp"

namespace flucid {

// Parses a whole program: one expression, usually `E where ... end`.
// Throws ParseError carrying the expected-token set and position.
NodePtr parse_program(const std::vector<Token>& tokens);

// tokenize + parse_program
NodePtr parse_source(std::string_view source);

// Checks that every identifier resolves to a declaration in an enclosing
// where clause, a function parameter, or one of `externals` (host builtins).
// Dimension positions (`.d`, `#d`) additionally accept observation sequence
// names. Throws UnresolvedIdentifier for the first miss.
void check_bindings(const AstNode& program, const std::set<std::string, std::less<>>& externals = {});

}  // namespace flucid
