#pragma once

#include <set>
#include <string>

#include "sepeq/expr.hpp"

namespace sepeq {

// Parses an arithmetic expression over + - * / ^ ( ), integer/decimal
// literals, `i` (imaginary unit), sqrt(...) and exp(...).  Identifiers listed
// in `variables` become Variable nodes; all other identifiers become
// Parameter nodes.  `^` expects a literal integer exponent (optionally
// negative, optionally parenthesized).  Throws std::runtime_error with a
// position on malformed input.
Expr parse_expr(const std::string& src, const std::set<std::string>& variables);

}  // namespace sepeq
