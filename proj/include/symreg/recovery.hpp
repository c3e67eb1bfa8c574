#pragma once

#include <span>

#include "symreg/benchmarks.hpp"
#include "symreg/dataset.hpp"
#include "symreg/simplify.hpp"
#include "symreg/token.hpp"
#include "symreg/traversal.hpp"

namespace symreg {

struct RecoveryCheck {
  bool recovered = false;      // the verdict: the numeric screen's decision
  bool screen_pass = false;
  int points_compared = 0;     // rows where both sides were finite
  ProveResult prover = ProveResult::kOutsideFragment;  // advisory only
};

// Numeric equivalence screen.  1000 deterministic points are drawn per
// variable from the training domain extended by 10% of its width on each
// side; rows where either expression is non-finite are skipped (that is how
// validity regions like x > 0 under log are respected).  The screen passes
// when at least 500 rows survive and every surviving row agrees to 1e-10
// in absolute or relative terms.  A symbolic proof attempt is recorded
// alongside for diagnostics but never overrides the screen.
RecoveryCheck check_recovery(const TokenLibrary& truth_lib,
                             const Traversal& truth,
                             const TokenLibrary& cand_lib,
                             const Traversal& cand,
                             std::span<const double> cand_consts,
                             std::span<const Interval> domain);

RecoveryCheck is_recovered(const InstantiatedBenchmark& bench,
                           const Traversal& cand,
                           std::span<const double> cand_consts);

}  // namespace symreg
