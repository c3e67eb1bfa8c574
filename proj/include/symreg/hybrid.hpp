#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "symreg/constraints.hpp"
#include "symreg/dataset.hpp"
#include "symreg/gp.hpp"
#include "symreg/policy.hpp"
#include "symreg/reward.hpp"
#include "symreg/rng.hpp"

namespace symreg {

struct AblationFlags {
  bool disable_gp = false;
  bool disable_rnn_training = false;
  bool random_seed_population = false;
  bool exclude_rnn_from_training = false;
  bool exclude_gp_from_training = false;
  bool uniform_mutation_only = false;
  bool drop_constraints = false;  // lifts trig/inverse rules, keeps lengths
};

struct SearchConfig {
  int batch_size = 500;        // N
  int generations = 25;        // S
  int top_m = 1;               // M, GP samples joined into the training set
  Trainer trainer = Trainer::kPqt;
  std::int64_t budget = 2'000'000;
  double learning_rate = 0.0025;
  double entropy_weight = 0.005;
  double risk_epsilon = 0.05;
  double ewma_alpha = 0.25;
  int pqt_k = 10;
  int hidden_size = 32;
  GpConfig gp;
  ConstraintSet omega;
  ConstOptOptions const_opt;
  AblationFlags ablations;
  // Stop as soon as a candidate fits the training data to within
  // early_exit_nrmse; disable for experiments that measure best error under
  // the full budget.
  bool early_exit = true;
  double early_exit_nrmse = 1e-12;
};

struct IterationStats {
  int iteration = 0;
  std::int64_t candidates_used = 0;  // cumulative, after this iteration
  double best_reward = 0.0;          // of the best-so-far expression
  double batch_mean_reward = std::numeric_limits<double>::quiet_NaN();
  double batch_max_reward = std::numeric_limits<double>::quiet_NaN();
  double gp_mean_reward = std::numeric_limits<double>::quiet_NaN();
  double gp_max_reward = std::numeric_limits<double>::quiet_NaN();
  int n_train = 0;  // size of the joined training set (0 when not training)
  double loss = std::numeric_limits<double>::quiet_NaN();
  bool train_applied = false;
};

struct SearchResult {
  Traversal best;
  Fitness best_fitness;
  std::vector<double> best_reward_trace;  // one entry per iteration
  std::vector<IterationStats> iterations;
  std::int64_t candidates = 0;
  double wall_seconds = 0.0;
  bool early_exit = false;  // an exact fit ended the run before the budget
};

// Deterministic derivation of the independent rng streams a search run uses,
// shared with tests that reconstruct a reference loop around the same
// policy.  Streams feed Rng::mix(seed, stream).
namespace search_streams {
inline constexpr std::uint64_t kPolicyInit = 1;
inline constexpr std::uint64_t kSampling = 2;
inline constexpr std::uint64_t kGpVariation = 3;
inline constexpr std::uint64_t kSeedPopulation = 4;
}  // namespace search_streams

// Top-M individuals by reward over the union of all provided generations,
// deduplicated by traversal (first occurrence wins ties), appended after the
// generator batch.
std::vector<Traversal> select_training_set(
    std::span<const std::vector<Individual>> gp_generations,
    std::span<const Traversal> rnn_batch, int top_m);

// One full search run: repeatedly sample a generator batch, seed a fresh GP
// population from it, evolve for `generations` steps, join the best GP
// individuals with the batch, take one training step, and track the best
// expression seen, until the candidate budget is spent or an exact fit
// appears.  Every generator sample, random seed individual, and GP offspring
// (reverted or not) costs one unit of budget; an iteration always runs to
// completion once started.
//
// Ablation precedence: disable_gp removes the GP phase entirely (the
// exclude_* flags then have nothing to act on); random_seed_population plus
// disable_rnn_training skips generator sampling, leaving pure restarted GP.
SearchResult run_search(
    const TokenLibrary& lib, const Dataset& data, const SearchConfig& cfg,
    std::uint64_t seed,
    const std::function<void(const IterationStats&)>& on_iteration = {});

}  // namespace symreg
