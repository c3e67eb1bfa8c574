#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace symreg {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Dataset {
  std::string name;
  Eigen::MatrixXd x_train;  // rows x variables
  Eigen::VectorXd y_train;
  Eigen::MatrixXd x_test;
  Eigen::VectorXd y_test;
  double sigma_y = 0.0;               // population std dev of y_train
  std::vector<Interval> domain;       // training domain per variable

  int n_variables() const { return static_cast<int>(x_train.cols()); }
};

}  // namespace symreg
