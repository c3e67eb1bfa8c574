#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symreg/benchmarks.hpp"
#include "symreg/hybrid.hpp"

namespace symreg {

// Everything one (benchmark, seed) search run produced.
struct RunRecord {
  std::string benchmark;
  std::uint64_t seed = 0;
  bool recovered = false;
  std::string prover;  // advisory symbolic check: proved/refuted/outside
  double best_reward = 0.0;
  double train_nrmse = 0.0;
  double test_nmse = 0.0;
  double test_rmse = 0.0;
  std::string expression;  // best candidate, infix, constants inlined
  std::int64_t candidates = 0;
  int iterations = 0;
  bool early_exit = false;
  double wall_seconds = 0.0;
};

struct BenchmarkSummary {
  std::string name;
  int n_runs = 0;
  int n_recovered = 0;
  double recovery_pct = 0.0;
  // 1.96 binomial standard errors on this benchmark's own recovery rate
  double ci95_binomial_pct = 0.0;
  double min_test_nmse = 0.0;
  double mean_test_nmse = 0.0;
  double mean_test_rmse = 0.0;
  double median_test_rmse = 0.0;
  double mean_runtime_s = 0.0;
};

struct ExperimentReport {
  std::vector<RunRecord> runs;
  std::vector<BenchmarkSummary> benchmarks;
  // Mean of the per-benchmark recovery rates, with a 95% normal-theory
  // half-width (1.96 standard errors across benchmarks).
  double mean_recovery_pct = 0.0;
  double ci95_recovery_pct = 0.0;
};

// Workers for run_experiment: the SR_WORKERS environment variable when set,
// otherwise the hardware concurrency (at least 1).
int default_workers();

// One search run end to end: instantiate the benchmark with the run seed,
// search, score the best expression on the test split, check recovery.
RunRecord run_single(const BenchmarkSpec& spec, const SearchConfig& cfg,
                     std::uint64_t seed);

// Full cross product of benchmarks and seeds, fanned out over `workers`
// threads.  Results are ordered by (benchmark, seed) regardless of
// scheduling; `progress` is called once per finished run under a lock.
ExperimentReport run_experiment(
    const std::vector<BenchmarkSpec>& specs, const SearchConfig& cfg,
    const std::vector<std::uint64_t>& seeds, int workers = 0,
    const std::function<void(const RunRecord&)>& progress = {});

// Aggregation used by run_experiment and by `report` over stored runs.
ExperimentReport aggregate_runs(std::vector<RunRecord> runs);

void write_runs_jsonl(const std::string& path,
                      const std::vector<RunRecord>& runs);
std::vector<RunRecord> read_runs_jsonl(const std::string& path);

// benchmark,n_runs,recovery_pct,min_nmse,mean_runtime_s
void write_summary_csv(const std::string& path, const ExperimentReport& rep);

std::string render_report(const ExperimentReport& rep);

}  // namespace symreg
