#include "symreg/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

namespace symreg {

std::vector<Traversal> select_training_set(
    std::span<const std::vector<Individual>> gp_generations,
    std::span<const Traversal> rnn_batch, int top_m) {
  std::vector<const Individual*> pool;
  std::unordered_set<Traversal, TraversalHash> seen;
  for (const auto& gen : gp_generations) {
    for (const Individual& ind : gen) {
      if (seen.insert(ind.t).second) pool.push_back(&ind);
    }
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Individual* a, const Individual* b) {
                     return a->fitness.reward > b->fitness.reward;
                   });
  if (top_m > static_cast<int>(pool.size())) {
    throw std::invalid_argument("top_m exceeds the number of individuals");
  }

  std::vector<Traversal> out(rnn_batch.begin(), rnn_batch.end());
  for (int i = 0; i < top_m; ++i) out.push_back(pool[i]->t);
  return out;
}

namespace {

Traversal random_seed_tree(const TokenLibrary& lib, const ConstraintSet& omega,
                           Rng& rng) {
  for (;;) {
    int depth = 2 + rng.uniform_int(4);
    Traversal t = random_grow_tree(lib, depth, rng);
    if (check_constraints(lib, t, omega)) return t;
  }
}

struct BestTracker {
  Traversal t;
  Fitness fitness;
  bool set = false;

  // Strict improvement only, so the first expression reaching a reward
  // level is the one reported.
  void offer(const Traversal& cand, const Fitness& f) {
    if (!set || f.reward > fitness.reward) {
      t = cand;
      fitness = f;
      set = true;
    }
  }
};

}  // namespace

SearchResult run_search(
    const TokenLibrary& lib, const Dataset& data, const SearchConfig& cfg,
    std::uint64_t seed,
    const std::function<void(const IterationStats&)>& on_iteration) {
  if (cfg.top_m > cfg.batch_size) {
    throw std::invalid_argument("top_m must not exceed batch_size");
  }
  if (cfg.budget < cfg.batch_size) {
    throw std::invalid_argument("budget smaller than one batch");
  }
  if (cfg.ablations.disable_gp && cfg.ablations.random_seed_population &&
      cfg.ablations.disable_rnn_training) {
    throw std::invalid_argument(
        "configuration disables every candidate source");
  }

  const auto t_start = std::chrono::steady_clock::now();
  const AblationFlags& abl = cfg.ablations;

  ConstraintSet omega = cfg.omega;
  if (abl.drop_constraints) {
    omega.forbid_nested_trig = false;
    omega.forbid_inverse_pairs = false;
  }
  GpConfig gp_cfg = cfg.gp;
  gp_cfg.omega = omega;
  gp_cfg.uniform_mutation_only = abl.uniform_mutation_only;

  Policy policy(lib, omega, cfg.hidden_size,
                Rng::mix(seed, search_streams::kPolicyInit));
  Rng rng_sample(Rng::mix(seed, search_streams::kSampling));
  Rng rng_gp(Rng::mix(seed, search_streams::kGpVariation));
  Rng rng_seed_pop(Rng::mix(seed, search_streams::kSeedPopulation));

  RewardContext ctx(data, cfg.const_opt);
  PriorityQueue queue(cfg.pqt_k);
  BestTracker best;
  SearchResult result;

  const bool pure_gp = abl.random_seed_population && abl.disable_rnn_training;
  const bool training = !abl.disable_rnn_training && !pure_gp;
  std::int64_t candidates = 0;
  int iteration = 0;

  auto exact_fit = [&]() {
    return cfg.early_exit && best.set &&
           best.fitness.nrmse <= cfg.early_exit_nrmse;
  };

  while (candidates < cfg.budget && !exact_fit()) {
    ++iteration;
    IterationStats stats;
    stats.iteration = iteration;

    std::vector<Traversal> rnn_batch;
    std::vector<double> rnn_rewards;
    if (!pure_gp) {
      rnn_batch = policy.sample_batch(cfg.batch_size, rng_sample);
      candidates += cfg.batch_size;
      double sum = 0.0, mx = 0.0;
      for (const Traversal& t : rnn_batch) {
        const Fitness& f = ctx.reward(lib, t);
        rnn_rewards.push_back(f.reward);
        best.offer(t, f);
        sum += f.reward;
        mx = std::max(mx, f.reward);
      }
      stats.batch_mean_reward = sum / static_cast<double>(rnn_batch.size());
      stats.batch_max_reward = mx;
    }

    std::vector<std::vector<Individual>> generations;
    if (!abl.disable_gp && !exact_fit()) {
      std::vector<Individual> pop;
      pop.reserve(cfg.batch_size);
      if (abl.random_seed_population) {
        for (int i = 0; i < cfg.batch_size; ++i) {
          Individual ind;
          ind.t = random_seed_tree(lib, omega, rng_seed_pop);
          ind.fitness = ctx.reward(lib, ind.t);
          best.offer(ind.t, ind.fitness);
          pop.push_back(std::move(ind));
        }
        candidates += cfg.batch_size;
      } else {
        for (std::size_t i = 0; i < rnn_batch.size(); ++i) {
          Individual ind;
          ind.t = rnn_batch[i];
          ind.fitness = ctx.reward(lib, ind.t);
          pop.push_back(std::move(ind));
        }
      }
      generations.push_back(std::move(pop));

      double gp_sum = 0.0, gp_max = 0.0;
      std::int64_t gp_count = 0;
      for (int s = 0; s < cfg.generations && !exact_fit(); ++s) {
        auto next = generation_step(lib, generations.back(), gp_cfg, ctx,
                                    rng_gp);
        candidates += static_cast<std::int64_t>(next.size());
        for (const Individual& ind : next) {
          best.offer(ind.t, ind.fitness);
          gp_sum += ind.fitness.reward;
          gp_max = std::max(gp_max, ind.fitness.reward);
          ++gp_count;
        }
        generations.push_back(std::move(next));
      }
      if (gp_count > 0) {
        stats.gp_mean_reward = gp_sum / static_cast<double>(gp_count);
        stats.gp_max_reward = gp_max;
      }
    }

    if (training && !exact_fit()) {
      std::vector<Traversal> train_set;
      if (abl.disable_gp || abl.exclude_gp_from_training ||
          generations.empty()) {
        train_set = rnn_batch;
      } else if (abl.exclude_rnn_from_training) {
        train_set = select_training_set(generations, {}, cfg.top_m);
      } else {
        train_set = select_training_set(generations, rnn_batch, cfg.top_m);
      }

      std::vector<double> train_rewards;
      train_rewards.reserve(train_set.size());
      for (const Traversal& t : train_set) {
        train_rewards.push_back(ctx.reward(lib, t).reward);
      }
      stats.n_train = static_cast<int>(train_set.size());

      LossInputs in;
      in.method = cfg.trainer;
      in.batch = train_set;
      in.rewards = train_rewards;
      in.risk_epsilon = cfg.risk_epsilon;
      in.entropy_weight = cfg.entropy_weight;
      in.ewma_alpha = cfg.ewma_alpha;
      if (cfg.trainer == Trainer::kPqt) {
        queue.update(train_set, train_rewards);
        in.queue = &queue;
      }
      auto outcome = policy.train_step(in, cfg.learning_rate);
      stats.loss = outcome.loss;
      stats.train_applied = outcome.applied;
    }

    stats.candidates_used = candidates;
    stats.best_reward = best.set ? best.fitness.reward : 0.0;
    result.best_reward_trace.push_back(stats.best_reward);
    result.iterations.push_back(stats);
    if (on_iteration) on_iteration(stats);

    // TEMP trace, remove before commit.
    if (std::getenv("SR_TRACE")) {
      double blen = 0.0;
      int bcap = 0;
      std::unordered_set<Traversal, TraversalHash> bdist;
      for (const Traversal& t : rnn_batch) {
        blen += static_cast<double>(t.size());
        if (static_cast<int>(t.size()) >= omega.max_length - 1) ++bcap;
        bdist.insert(t);
      }
      if (!rnn_batch.empty()) blen /= static_cast<double>(rnn_batch.size());
      double plen = 0.0;
      std::unordered_set<Traversal, TraversalHash> pdist;
      if (!generations.empty()) {
        for (const Individual& ind : generations.back()) {
          plen += static_cast<double>(ind.t.size());
          pdist.insert(ind.t);
        }
        plen /= static_cast<double>(generations.back().size());
      }
      double qmin = 0.0, qmax = 0.0, qlen = 0.0;
      if (queue.size() > 0) {
        qmin = queue.entries().back().reward;
        qmax = queue.entries().front().reward;
        for (const auto& e : queue.entries()) {
          qlen += static_cast<double>(e.t.size());
        }
        qlen /= static_cast<double>(queue.size());
      }
      std::fprintf(stderr,
                   "TRACE it=%d blen=%.1f bcap=%d bdist=%zu bmean=%.4f "
                   "bmax=%.4f gmax=%.4f plen=%.1f pdist=%zu qmin=%.4f "
                   "qmax=%.4f qlen=%.1f best=%.6f\n",
                   iteration, blen, bcap, bdist.size(),
                   stats.batch_mean_reward, stats.batch_max_reward,
                   stats.gp_max_reward, plen, pdist.size(), qmin, qmax, qlen,
                   stats.best_reward);
    }
  }

  result.best = best.t;
  result.best_fitness = best.fitness;
  result.candidates = candidates;
  result.early_exit = exact_fit();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

}  // namespace symreg
