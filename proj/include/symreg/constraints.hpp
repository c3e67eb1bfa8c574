#pragma once

#include <cstdint>
#include <limits>

#include "symreg/traversal.hpp"

namespace symreg {

struct ConstraintSet {
  int min_length = 4;
  int max_length = 30;
  bool forbid_nested_trig = true;
  bool forbid_inverse_pairs = true;
  int max_constants = std::numeric_limits<int>::max();
};

// Bitmask over token ids (libraries are capped at 64 tokens) of the choices
// admissible at the builder's next position.  Enforces, jointly:
//  - an arity cap so the tree can still finish within max_length,
//  - no terminal that would complete the tree below min_length,
//  - no trig token under a trig ancestor,
//  - no exact inverse of the immediate unary parent,
//  - the constant budget.
// If the rules would exclude everything, variable tokens are re-admitted so
// sampling can always proceed; `fallback_hit` (optional) reports this.
std::uint64_t allowed_tokens(const TraversalBuilder& state,
                             const ConstraintSet& omega,
                             bool* fallback_hit = nullptr);

// Whole-traversal check over the same rule set, written as a direct tree
// walk so it stays independent of the incremental mask logic.
bool check_constraints(const TokenLibrary& lib, const Traversal& t,
                       const ConstraintSet& omega);

}  // namespace symreg
