#pragma once

#include <span>
#include <utility>
#include <vector>

#include "symreg/constraints.hpp"
#include "symreg/reward.hpp"
#include "symreg/rng.hpp"
#include "symreg/traversal.hpp"

namespace symreg {

struct GpConfig {
  double p_crossover = 0.5;
  double p_mutate = 0.5;
  int tournament_size = 5;
  int mutate_tree_max = 3;
  // Ablation: restrict the mutation mix to uniform subtree replacement.
  bool uniform_mutation_only = false;
  ConstraintSet omega;
};

struct Individual {
  Traversal t;
  Fitness fitness;
};

enum class MutationMode { kUniform, kNodeReplace, kInsert, kShrink };

// Index of the winner among k draws with replacement; on reward ties the
// earliest-drawn candidate wins.
int tournament_select(std::span<const Individual> pop, int k, Rng& rng);

// "Grow"-style random tree: every node above the depth cap picks uniformly
// from the whole library, nodes at the cap pick terminals only.  A cap of 1
// yields a single terminal.
Traversal random_grow_tree(const TokenLibrary& lib, int max_depth, Rng& rng);

// Swaps a uniform random subtree of each parent.  The pair of children
// conserves the combined token multiset.
std::pair<Traversal, Traversal> crossover_one_point(const TokenLibrary& lib,
                                                    const Traversal& a,
                                                    const Traversal& b,
                                                    Rng& rng);

// Applies one specific mutation mode.  A mode that cannot apply to `t`
// falls back to node replacement (and returns an unchanged copy if even
// that has no candidate site).
Traversal mutate_with_mode(const TokenLibrary& lib, const Traversal& t,
                           MutationMode mode, int mutate_tree_max, Rng& rng);

// Picks one of the four modes uniformly (or uniform replacement only, under
// the ablation flag) and applies it.  `chosen` (optional) reports the mode
// drawn, for diagnostics.
Traversal mutate(const TokenLibrary& lib, const Traversal& t,
                 const GpConfig& cfg, Rng& rng,
                 MutationMode* chosen = nullptr);

// The child if it satisfies every constraint, otherwise an exact copy of
// its pre-variation parent.
Traversal constrain_or_revert(const TokenLibrary& lib,
                              const ConstraintSet& omega, Traversal child,
                              const Traversal& parent);

// One generational step: N tournament selections, crossover on consecutive
// pairs with probability p_crossover, mutation with probability p_mutate,
// every variation reverted per child if it breaks a constraint, fitness
// evaluated for the result.  Output size equals input size; there is no
// elitism.
std::vector<Individual> generation_step(const TokenLibrary& lib,
                                        std::span<const Individual> pop,
                                        const GpConfig& cfg,
                                        RewardContext& ctx, Rng& rng);

}  // namespace symreg
