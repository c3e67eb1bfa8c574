#pragma once

#include <span>

#include "symreg/token.hpp"
#include "symreg/traversal.hpp"

namespace symreg {

// Outcome of the symbolic equivalence check.  kProvedZero means the
// difference of the two expressions canonicalizes to the zero function.
// kRefuted is only ever returned for expressions that are purely rational
// (no transcendental leaves survive canonicalization), where distinct
// canonical forms imply distinct functions.  Everything else that fails to
// reduce, overflows, or leaves unequal forms containing opaque
// subexpressions is kOutsideFragment: the prover abstains.
enum class ProveResult {
  kProvedZero,
  kRefuted,
  kOutsideFragment,
};

const char* prove_result_name(ProveResult r);

// Attempts to prove f_a == f_b by rewriting both sides into a canonical
// fraction of multivariate polynomials with exact rational coefficients.
//
// The rational fragment covers + - * / neg inv square cube and integer
// powers.  Transcendental applications (sin, exp, sqrt, ...) become opaque
// atoms keyed by their canonicalized argument, so structurally shuffled
// but rationally identical compositions still match.  exp(log(u)) and
// log(exp(u)) collapse to u first.  Floating point constants are mapped to
// nearby small rationals; constants with no close small rational, exploding
// term counts, or coefficient overflow abort into kOutsideFragment.
ProveResult prove_equal(const TokenLibrary& lib_a, const Traversal& a,
                        std::span<const double> consts_a,
                        const TokenLibrary& lib_b, const Traversal& b,
                        std::span<const double> consts_b);

}  // namespace symreg
