#include "symreg/recovery.hpp"

#include <cmath>

#include "symreg/eval.hpp"
#include "symreg/rng.hpp"

namespace symreg {
namespace {

constexpr int kScreenPoints = 1000;
constexpr int kMinValidPoints = 500;
constexpr double kTolerance = 1e-10;
// Fixed stream so verdicts depend only on the expressions and the domain.
constexpr std::uint64_t kScreenSeed = 0x5eed'0f0f'2026ULL;

}  // namespace

RecoveryCheck check_recovery(const TokenLibrary& truth_lib,
                             const Traversal& truth,
                             const TokenLibrary& cand_lib,
                             const Traversal& cand,
                             std::span<const double> cand_consts,
                             std::span<const Interval> domain) {
  const int n_vars = static_cast<int>(domain.size());
  Eigen::MatrixXd x(kScreenPoints, n_vars);
  Rng rng(kScreenSeed);
  for (int v = 0; v < n_vars; ++v) {
    const double width = domain[v].hi - domain[v].lo;
    const double lo = domain[v].lo - 0.1 * width;
    const double hi = domain[v].hi + 0.1 * width;
    for (int i = 0; i < kScreenPoints; ++i) x(i, v) = rng.uniform(lo, hi);
  }

  const Eigen::VectorXd yt = evaluate(truth_lib, truth, x).values;
  const Eigen::VectorXd yc = evaluate(cand_lib, cand, x, cand_consts).values;

  RecoveryCheck out;
  bool all_close = true;
  for (int i = 0; i < kScreenPoints; ++i) {
    if (!std::isfinite(yt(i)) || !std::isfinite(yc(i))) continue;
    ++out.points_compared;
    const double diff = std::abs(yt(i) - yc(i));
    const double scale = std::max(std::abs(yt(i)), std::abs(yc(i)));
    if (!(diff < kTolerance || diff < kTolerance * scale)) all_close = false;
  }
  out.screen_pass = all_close && out.points_compared >= kMinValidPoints;
  out.recovered = out.screen_pass;
  out.prover = prove_equal(cand_lib, cand, cand_consts, truth_lib, truth, {});
  return out;
}

RecoveryCheck is_recovered(const InstantiatedBenchmark& bench,
                           const Traversal& cand,
                           std::span<const double> cand_consts) {
  return check_recovery(bench.truth_lib, bench.truth, bench.lib, cand,
                        cand_consts, bench.data.domain);
}

}  // namespace symreg
