#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "symreg/constraints.hpp"
#include "symreg/rng.hpp"
#include "symreg/traversal.hpp"

namespace symreg {

enum class Trainer { kVpg, kRspg, kPqt };

const char* trainer_name(Trainer t);
Trainer trainer_from_name(std::string_view name);

// Fixed-capacity pool of the highest-reward unique traversals seen so far.
// Entries are ordered by (reward desc, insertion order asc); on reward ties
// the earlier insertion survives truncation.
class PriorityQueue {
 public:
  explicit PriorityQueue(int capacity) : capacity_(capacity) {}

  struct Entry {
    Traversal t;
    double reward;
    std::uint64_t seq;
  };

  void update(std::span<const Traversal> ts, std::span<const double> rewards);
  const std::vector<Entry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }

 private:
  int capacity_;
  std::uint64_t next_seq_ = 0;
  std::vector<Entry> entries_;
};

// Empirical quantile with linear interpolation between order statistics.
double empirical_quantile(std::span<const double> values, double q);

struct LogProbEntropy {
  double log_prob = 0.0;
  double entropy = 0.0;
};

struct LossInputs {
  Trainer method = Trainer::kPqt;
  std::span<const Traversal> batch;
  std::span<const double> rewards;        // parallel to batch
  const PriorityQueue* queue = nullptr;   // PQT
  double baseline = 0.0;                  // VPG
  double risk_epsilon = 0.05;             // RSPG
  double entropy_weight = 0.005;
  double ewma_alpha = 0.25;               // used by train_step for VPG
};

// Autoregressive expression generator: a single-layer LSTM that consumes the
// concatenated one-hots of the (parent, sibling) context of the position
// being generated and emits logits over the token library, masked by the
// constraint set at every step.  The output projection starts at zero, so an
// untrained policy is uniform over the admissible tokens.
class Policy {
 public:
  Policy(TokenLibrary lib, ConstraintSet omega, int hidden_size,
         std::uint64_t init_seed);

  // N constraint-satisfying traversals.  Each batch element samples from its
  // own substream derived from (one draw of rng, element index), so a
  // parallel implementation would produce the identical batch.
  std::vector<Traversal> sample_batch(int n, Rng& rng) const;

  // Total log probability and total per-step entropy of a complete
  // traversal.  A traversal that violates the sampling masks gets
  // log_prob = -inf and is reported invalid.
  LogProbEntropy log_prob_entropy(const Traversal& t) const;

  // Distribution over the next token given a sampled prefix (diagnostics and
  // tests; zero probability on masked tokens).
  Eigen::VectorXd step_probs(const Traversal& prefix) const;

  // Scalar training loss:
  //   VPG:  mean over batch of (R - baseline) * (-log p)
  //   RSPG: mean over the samples above the (1 - eps) reward quantile of
  //         (R - quantile) * (-log p); everything at or below contributes 0
  //   PQT:  mean over queue entries of -log p
  // each minus entropy_weight * mean batch entropy.
  double compute_loss(const LossInputs& in) const;

  struct TrainOutcome {
    double loss = 0.0;
    bool applied = false;  // false when the gradient was non-finite
    double baseline_used = 0.0;
  };

  // One Adam step on compute_loss.  For VPG the EWMA baseline is advanced
  // with the batch mean reward first and the advanced value is used.
  TrainOutcome train_step(const LossInputs& in, double learning_rate);

  // Flat parameter vector; layout is stable across calls.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  // Analytic gradient of compute_loss at the current parameters.
  Eigen::VectorXd loss_gradient(const LossInputs& in, double* loss_out) const;

  const TokenLibrary& library() const { return lib_; }
  const ConstraintSet& constraints() const { return omega_; }
  int hidden_size() const { return hidden_; }

 private:
  struct Params {
    Eigen::MatrixXd w_x;    // 4H x I
    Eigen::MatrixXd w_h;    // 4H x H
    Eigen::VectorXd b;      // 4H
    Eigen::MatrixXd w_out;  // V x H
    Eigen::VectorXd b_out;  // V
  };

  struct SeqWeight {
    const Traversal* t;
    double policy_coeff;   // multiplies -log p
    double entropy_coeff;  // multiplies entropy, subtracted
  };

  struct ReplayOutcome {
    double loss = 0.0;
    std::vector<LogProbEntropy> per_seq;
    std::vector<bool> valid;
    int n_invalid = 0;
  };

  Eigen::VectorXd input_row(TokenId parent, TokenId sibling) const;
  ReplayOutcome replay(std::span<const SeqWeight> seqs, Params* grad) const;
  std::vector<SeqWeight> weighted_sequences(const LossInputs& in) const;

  TokenLibrary lib_;
  ConstraintSet omega_;
  int hidden_;
  int input_dim_;
  Params p_;
  Params adam_m_;
  Params adam_v_;
  long long adam_t_ = 0;
  bool have_baseline_ = false;
  double ewma_baseline_ = 0.0;
};

}  // namespace symreg
