#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "symreg/const_opt.hpp"
#include "symreg/dataset.hpp"
#include "symreg/traversal.hpp"

namespace symreg {

// Root mean squared error normalized by the target's population standard
// deviation.  Returns +inf when any prediction is non-finite.
double nrmse(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y,
             double sigma_y);

struct Fitness {
  double reward = 0.0;  // 1 / (1 + nrmse), in [0, 1]
  double nrmse = std::numeric_limits<double>::infinity();
  std::vector<double> consts;
};

// Scores a traversal on the training split.  Constant placeholders are
// fitted first; a non-finite evaluation maps to reward 0 exactly.
Fitness compute_reward(const TokenLibrary& lib, const Traversal& t,
                       const Dataset& data, const ConstOptOptions& opts = {});

enum class Split { kTrain, kTest };

struct ErrorMetrics {
  double rmse = std::numeric_limits<double>::infinity();
  double nmse = std::numeric_limits<double>::infinity();
};

// rmse and rmse^2 / population-variance(y) on the chosen split, evaluated
// with already-fitted constants.
ErrorMetrics error_metrics(const TokenLibrary& lib, const Traversal& t,
                           std::span<const double> consts, const Dataset& data,
                           Split split);

// Reward evaluation with a per-run memo keyed by traversal.  Constant
// fitting is deterministic, so the memo is exact: cached and uncached
// results are bit-identical.  Entry count is capped; the memo resets when
// full rather than evicting.
class RewardContext {
 public:
  explicit RewardContext(const Dataset& data, ConstOptOptions opts = {},
                         std::size_t max_entries = 1u << 19)
      : data_(&data), opts_(opts), max_entries_(max_entries) {}

  const Fitness& reward(const TokenLibrary& lib, const Traversal& t);

  void set_cache_enabled(bool enabled);
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  const Dataset& dataset() const { return *data_; }

 private:
  const Dataset* data_;
  ConstOptOptions opts_;
  std::size_t max_entries_;
  bool enabled_ = true;
  std::unordered_map<Traversal, Fitness, TraversalHash> cache_;
  Fitness scratch_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace symreg
