#pragma once

#include <Eigen/Core>
#include <vector>

#include "symreg/traversal.hpp"

namespace symreg {

struct ConstOptOptions {
  int max_iterations = 200;
  // converged when the relative MSE improvement of an accepted step drops
  // below this
  double relative_tolerance = 1e-12;
  // number of deterministic starting points; the first is always all-ones
  int n_starts = 1;
};

// Fits the constant placeholders of `t` to (x, y) by least squares with a
// Levenberg-Marquardt iteration over a forward-difference Jacobian.
// Deterministic: fixed all-ones start, fixed damping schedule.  If the
// objective is non-finite at the start the start vector is returned
// unchanged.
std::vector<double> optimize_constants(const TokenLibrary& lib,
                                       const Traversal& t,
                                       const Eigen::MatrixXd& x,
                                       const Eigen::VectorXd& y,
                                       const ConstOptOptions& opts = {});

}  // namespace symreg
