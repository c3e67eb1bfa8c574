#include "symreg/gp.hpp"

#include <cassert>
#include <stdexcept>

namespace symreg {

int tournament_select(std::span<const Individual> pop, int k, Rng& rng) {
  if (pop.empty()) throw std::invalid_argument("empty population");
  int best = rng.uniform_int(static_cast<int>(pop.size()));
  for (int i = 1; i < k; ++i) {
    int cand = rng.uniform_int(static_cast<int>(pop.size()));
    if (pop[cand].fitness.reward > pop[best].fitness.reward) best = cand;
  }
  return best;
}

namespace {

void grow(const TokenLibrary& lib, int depth_left, Rng& rng, Traversal& out) {
  TokenId pick;
  if (depth_left <= 1) {
    std::vector<TokenId> terminals;
    for (TokenId id = 0; id < lib.size(); ++id) {
      if (lib.is_terminal(id)) terminals.push_back(id);
    }
    pick = terminals[rng.uniform_int(static_cast<int>(terminals.size()))];
  } else {
    pick = static_cast<TokenId>(rng.uniform_int(lib.size()));
  }
  out.push_back(pick);
  for (int c = 0; c < lib.arity(pick); ++c) {
    grow(lib, depth_left - 1, rng, out);
  }
}

// Positions whose token has at least one same-arity alternative.
std::vector<int> replaceable_positions(const TokenLibrary& lib,
                                       const Traversal& t) {
  std::vector<int> alternatives(3, 0);
  for (TokenId id = 0; id < lib.size(); ++id) ++alternatives[lib.arity(id)];
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(t.size()); ++i) {
    if (alternatives[lib.arity(t[i])] > 1) out.push_back(i);
  }
  return out;
}

Traversal splice(const Traversal& t, int pos, int span,
                 const Traversal& replacement) {
  Traversal out;
  out.reserve(t.size() - span + replacement.size());
  out.insert(out.end(), t.begin(), t.begin() + pos);
  out.insert(out.end(), replacement.begin(), replacement.end());
  out.insert(out.end(), t.begin() + pos + span, t.end());
  return out;
}

Traversal mutate_node_replace(const TokenLibrary& lib, const Traversal& t,
                              Rng& rng) {
  std::vector<int> sites = replaceable_positions(lib, t);
  if (sites.empty()) return t;
  int pos = sites[rng.uniform_int(static_cast<int>(sites.size()))];
  std::vector<TokenId> options;
  for (TokenId id = 0; id < lib.size(); ++id) {
    if (id != t[pos] && lib.arity(id) == lib.arity(t[pos])) {
      options.push_back(id);
    }
  }
  Traversal out = t;
  out[pos] = options[rng.uniform_int(static_cast<int>(options.size()))];
  return out;
}

Traversal mutate_uniform(const TokenLibrary& lib, const Traversal& t,
                         int mutate_tree_max, Rng& rng) {
  int pos = rng.uniform_int(static_cast<int>(t.size()));
  int span = subtree_span(lib, t, pos);
  Traversal replacement;
  grow(lib, mutate_tree_max, rng, replacement);
  return splice(t, pos, span, replacement);
}

Traversal mutate_insert(const TokenLibrary& lib, const Traversal& t,
                        Rng& rng) {
  std::vector<TokenId> ops;
  for (TokenId id = 0; id < lib.size(); ++id) {
    if (lib.arity(id) >= 1) ops.push_back(id);
  }
  if (ops.empty()) return mutate_node_replace(lib, t, rng);

  int pos = rng.uniform_int(static_cast<int>(t.size()));
  int span = subtree_span(lib, t, pos);
  TokenId op = ops[rng.uniform_int(static_cast<int>(ops.size()))];
  int slot = rng.uniform_int(lib.arity(op));

  Traversal replacement;
  replacement.push_back(op);
  for (int c = 0; c < lib.arity(op); ++c) {
    if (c == slot) {
      replacement.insert(replacement.end(), t.begin() + pos,
                         t.begin() + pos + span);
    } else {
      grow(lib, 2, rng, replacement);
    }
  }
  return splice(t, pos, span, replacement);
}

Traversal mutate_shrink(const TokenLibrary& lib, const Traversal& t,
                        Rng& rng) {
  std::vector<int> sites;
  for (int i = 0; i < static_cast<int>(t.size()); ++i) {
    if (lib.arity(t[i]) >= 1) sites.push_back(i);
  }
  if (sites.empty()) return mutate_node_replace(lib, t, rng);

  int pos = sites[rng.uniform_int(static_cast<int>(sites.size()))];
  int span = subtree_span(lib, t, pos);
  std::vector<int> terminals;
  for (int i = pos; i < pos + span; ++i) {
    if (lib.is_terminal(t[i])) terminals.push_back(i);
  }
  int keep = terminals[rng.uniform_int(static_cast<int>(terminals.size()))];
  Traversal replacement{t[keep]};
  return splice(t, pos, span, replacement);
}

}  // namespace

Traversal random_grow_tree(const TokenLibrary& lib, int max_depth, Rng& rng) {
  Traversal out;
  grow(lib, max_depth, rng, out);
  return out;
}

std::pair<Traversal, Traversal> crossover_one_point(const TokenLibrary& lib,
                                                    const Traversal& a,
                                                    const Traversal& b,
                                                    Rng& rng) {
  int pos_a = rng.uniform_int(static_cast<int>(a.size()));
  int pos_b = rng.uniform_int(static_cast<int>(b.size()));
  int span_a = subtree_span(lib, a, pos_a);
  int span_b = subtree_span(lib, b, pos_b);
  Traversal sub_a(a.begin() + pos_a, a.begin() + pos_a + span_a);
  Traversal sub_b(b.begin() + pos_b, b.begin() + pos_b + span_b);
  return {splice(a, pos_a, span_a, sub_b), splice(b, pos_b, span_b, sub_a)};
}

Traversal mutate_with_mode(const TokenLibrary& lib, const Traversal& t,
                           MutationMode mode, int mutate_tree_max, Rng& rng) {
  switch (mode) {
    case MutationMode::kUniform:
      return mutate_uniform(lib, t, mutate_tree_max, rng);
    case MutationMode::kNodeReplace:
      return mutate_node_replace(lib, t, rng);
    case MutationMode::kInsert:
      return mutate_insert(lib, t, rng);
    case MutationMode::kShrink:
      return mutate_shrink(lib, t, rng);
  }
  return t;
}

Traversal mutate(const TokenLibrary& lib, const Traversal& t,
                 const GpConfig& cfg, Rng& rng, MutationMode* chosen) {
  MutationMode mode = cfg.uniform_mutation_only
                          ? MutationMode::kUniform
                          : static_cast<MutationMode>(rng.uniform_int(4));
  if (chosen != nullptr) *chosen = mode;
  return mutate_with_mode(lib, t, mode, cfg.mutate_tree_max, rng);
}

Traversal constrain_or_revert(const TokenLibrary& lib,
                              const ConstraintSet& omega, Traversal child,
                              const Traversal& parent) {
  assert(check_constraints(lib, parent, omega));
  if (check_constraints(lib, child, omega)) return child;
  return parent;
}

std::vector<Individual> generation_step(const TokenLibrary& lib,
                                        std::span<const Individual> pop,
                                        const GpConfig& cfg,
                                        RewardContext& ctx, Rng& rng) {
  const int n = static_cast<int>(pop.size());
  std::vector<Individual> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.push_back(pop[tournament_select(pop, cfg.tournament_size, rng)]);
  }

  for (int i = 0; i + 1 < n; i += 2) {
    if (!rng.bernoulli(cfg.p_crossover)) continue;
    Traversal pre_a = out[i].t;
    Traversal pre_b = out[i + 1].t;
    auto [child_a, child_b] = crossover_one_point(lib, pre_a, pre_b, rng);
    out[i].t = constrain_or_revert(lib, cfg.omega, std::move(child_a), pre_a);
    out[i + 1].t =
        constrain_or_revert(lib, cfg.omega, std::move(child_b), pre_b);
  }

  for (int i = 0; i < n; ++i) {
    if (!rng.bernoulli(cfg.p_mutate)) continue;
    Traversal pre = out[i].t;
    Traversal mutant = mutate(lib, pre, cfg, rng);
    out[i].t = constrain_or_revert(lib, cfg.omega, std::move(mutant), pre);
  }

  for (Individual& ind : out) {
    ind.fitness = ctx.reward(lib, ind.t);
  }
  return out;
}

}  // namespace symreg
