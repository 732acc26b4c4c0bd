#pragma once

#include <string>

#include "stlcbf/formula.hpp"

namespace stlcbf {

/// Parses the textual grammar:
///   formula   := conj
///   conj      := unary { "&&" unary }
///   unary     := "true" | pred | "!" pred | temporal | "(" formula ")"
///   temporal  := ("F"|"G") "[" num "," num "]" "(" conj_pred ")"
///              | "(" conj_pred ")" "U" "[" num "," num "]" "(" conj_pred ")"
///   pred      := "ball(" vec "," num ")" | "clear(" ident "," num ")"
///              | "half(" vec "," num ")"
///   vec       := "[" num { "," num } "]"
/// Whitespace-insensitive. Throws ParseError (with line/column) on syntax
/// errors and FragmentError on formulas outside the supported fragment.
Formula parse_formula(const std::string& text);

}  // namespace stlcbf
