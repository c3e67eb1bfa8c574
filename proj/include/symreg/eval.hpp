#pragma once

#include <Eigen/Core>
#include <span>

#include "symreg/traversal.hpp"

namespace symreg {

struct EvalOutput {
  Eigen::VectorXd values;
  bool finite = true;  // every entry of values is finite
};

// Evaluates a complete traversal on each row of X with raw IEEE arithmetic:
// no protected operators, non-finite values propagate.  Constant
// placeholders take their values from `consts`, ordered by traversal
// position.  Throws std::invalid_argument on an incomplete traversal or a
// constant count mismatch.
EvalOutput evaluate(const TokenLibrary& lib, const Traversal& t,
                    const Eigen::MatrixXd& x,
                    std::span<const double> consts = {});

// Scalar evaluation of one input row.
double evaluate_row(const TokenLibrary& lib, const Traversal& t,
                    const double* row, std::span<const double> consts = {});

}  // namespace symreg
