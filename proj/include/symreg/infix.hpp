#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "symreg/traversal.hpp"

namespace symreg {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        position(position) {}
  int position;
};

// Parses an infix expression into a pre-order traversal over `lib`.
//
// Grammar: binary + - * / ^ with the usual precedence, unary minus,
// parentheses, f(arg) calls for every operator name in op_table(), numeric
// literals, variable names (with x/x1 and y/x2 aliases), and "const".
// `a ^ n` with integer n is sugar: it is expanded into repeated
// multiplication (negative n divides one by the expanded power), so no pow
// token is required for polynomial targets.  Non-integer exponents emit pow.
//
// With extend = false every symbol must already be in `lib`; unknown symbols
// raise ParseError.  With extend = true, operator tokens and literals missing
// from `lib` are appended to it, which is how ground-truth expressions are
// bound to a searchable library.
Traversal parse_infix(const std::string& text, TokenLibrary& lib,
                      bool extend = false);

// Fully parenthesized rendering.  Binary operators print infix, unary
// operators as calls (neg prints as a leading minus).  Constant placeholders
// print as their bound value when `consts` is provided, otherwise "const".
std::string format_infix(const TokenLibrary& lib, const Traversal& t,
                         std::span<const double> consts = {});

}  // namespace symreg
