#include "symreg/const_opt.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "symreg/eval.hpp"

namespace symreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mse_of(const Eigen::VectorXd& residuals) {
  if (!residuals.allFinite()) return kInf;
  return residuals.squaredNorm() / static_cast<double>(residuals.size());
}

Eigen::VectorXd residuals_at(const TokenLibrary& lib, const Traversal& t,
                             const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y,
                             const std::vector<double>& c) {
  EvalOutput out = evaluate(lib, t, x, std::span<const double>(c));
  return out.values - y;
}

std::vector<double> lm_fit(const TokenLibrary& lib, const Traversal& t,
                           const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           std::vector<double> c, const ConstOptOptions& opts,
                           double* final_mse) {
  const int nc = static_cast<int>(c.size());
  const int rows = static_cast<int>(y.size());

  Eigen::VectorXd r = residuals_at(lib, t, x, y, c);
  double f = mse_of(r);
  *final_mse = f;
  if (!std::isfinite(f)) return c;

  double lambda = 1e-3;
  Eigen::MatrixXd jac(rows, nc);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    bool jac_ok = true;
    for (int j = 0; j < nc; ++j) {
      double h = 1e-7 * std::max(1.0, std::abs(c[j]));
      std::vector<double> cj = c;
      cj[j] += h;
      Eigen::VectorXd rj = residuals_at(lib, t, x, y, cj);
      if (!rj.allFinite()) {
        jac_ok = false;
        break;
      }
      jac.col(j) = (rj - r) / h;
    }
    if (!jac_ok) break;

    Eigen::MatrixXd a = jac.transpose() * jac;
    Eigen::VectorXd g = jac.transpose() * r;

    bool stepped = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd damped = a;
      for (int j = 0; j < nc; ++j) {
        damped(j, j) += lambda * std::max(a(j, j), 1e-12);
      }
      Eigen::VectorXd delta = damped.ldlt().solve(-g);
      if (!delta.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> cn = c;
      for (int j = 0; j < nc; ++j) cn[j] += delta[j];
      Eigen::VectorXd rn = residuals_at(lib, t, x, y, cn);
      double fn = mse_of(rn);
      if (std::isfinite(fn) && fn < f) {
        double rel = (f - fn) / std::max(fn, 1e-300);
        c = std::move(cn);
        r = std::move(rn);
        f = fn;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (rel < opts.relative_tolerance) {
          *final_mse = f;
          return c;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!stepped) break;
  }
  *final_mse = f;
  return c;
}

}  // namespace

std::vector<double> optimize_constants(const TokenLibrary& lib,
                                       const Traversal& t,
                                       const Eigen::MatrixXd& x,
                                       const Eigen::VectorXd& y,
                                       const ConstOptOptions& opts) {
  const int nc = count_constants(lib, t);
  if (nc == 0) return {};

  // Additional starts beyond all-ones, used only when n_starts > 1.
  static const double kExtraStarts[] = {-1.0, 0.1, 10.0, -0.1, 3.0};

  std::vector<double> best;
  double best_mse = kInf;
  for (int s = 0; s < std::max(1, opts.n_starts); ++s) {
    std::vector<double> start(nc, 1.0);
    if (s > 0) {
      double v = kExtraStarts[(s - 1) % std::size(kExtraStarts)];
      start.assign(nc, v);
    }
    double mse = kInf;
    std::vector<double> fitted = lm_fit(lib, t, x, y, start, opts, &mse);
    if (s == 0 && !std::isfinite(mse)) {
      // Non-finite objective at the canonical start: report the start
      // vector; the caller scores it as unusable.
      return fitted;
    }
    if (best.empty() || mse < best_mse) {
      best = std::move(fitted);
      best_mse = mse;
    }
  }
  return best;
}

}  // namespace symreg
