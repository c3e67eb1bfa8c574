#include "symreg/reward.hpp"

#include <cmath>
#include <stdexcept>

#include "symreg/eval.hpp"

namespace symreg {

double nrmse(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y,
             double sigma_y) {
  if (y_hat.size() != y.size() || y.size() == 0) {
    throw std::invalid_argument("nrmse: size mismatch");
  }
  if (!y_hat.allFinite()) return std::numeric_limits<double>::infinity();
  double mse = (y_hat - y).squaredNorm() / static_cast<double>(y.size());
  return std::sqrt(mse) / sigma_y;
}

Fitness compute_reward(const TokenLibrary& lib, const Traversal& t,
                       const Dataset& data, const ConstOptOptions& opts) {
  Fitness fit;
  if (count_constants(lib, t) > 0) {
    fit.consts = optimize_constants(lib, t, data.x_train, data.y_train, opts);
  }
  EvalOutput out =
      evaluate(lib, t, data.x_train, std::span<const double>(fit.consts));
  if (!out.finite) {
    fit.reward = 0.0;
    fit.nrmse = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.nrmse = nrmse(out.values, data.y_train, data.sigma_y);
  fit.reward = 1.0 / (1.0 + fit.nrmse);
  return fit;
}

ErrorMetrics error_metrics(const TokenLibrary& lib, const Traversal& t,
                           std::span<const double> consts, const Dataset& data,
                           Split split) {
  const Eigen::MatrixXd& x = split == Split::kTrain ? data.x_train : data.x_test;
  const Eigen::VectorXd& y = split == Split::kTrain ? data.y_train : data.y_test;
  ErrorMetrics m;
  EvalOutput out = evaluate(lib, t, x, consts);
  if (!out.finite) return m;
  double n = static_cast<double>(y.size());
  double mse = (out.values - y).squaredNorm() / n;
  double mean = y.mean();
  double var = (y.array() - mean).matrix().squaredNorm() / n;
  m.rmse = std::sqrt(mse);
  m.nmse = mse / var;
  return m;
}

const Fitness& RewardContext::reward(const TokenLibrary& lib,
                                     const Traversal& t) {
  if (!enabled_) {
    scratch_ = compute_reward(lib, t, *data_, opts_);
    return scratch_;
  }
  auto it = cache_.find(t);
  if (it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  if (cache_.size() >= max_entries_) cache_.clear();
  auto [pos, inserted] =
      cache_.emplace(t, compute_reward(lib, t, *data_, opts_));
  return pos->second;
}

void RewardContext::set_cache_enabled(bool enabled) {
  enabled_ = enabled;
  if (!enabled) cache_.clear();
}

}  // namespace symreg
