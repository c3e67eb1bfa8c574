#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "symreg/experiment.hpp"
#include "symreg/infix.hpp"

using namespace symreg;

namespace {

SearchConfig quick_config() {
  SearchConfig cfg;
  cfg.batch_size = 100;
  cfg.generations = 5;
  cfg.budget = 50000;
  return cfg;
}

RunRecord synthetic(const std::string& bench, std::uint64_t seed,
                    bool recovered, double nmse, double rmse,
                    double wall = 1.0) {
  RunRecord r;
  r.benchmark = bench;
  r.seed = seed;
  r.recovered = recovered;
  r.prover = "outside-fragment";
  r.best_reward = recovered ? 1.0 : 0.8;
  r.train_nrmse = recovered ? 0.0 : 0.25;
  r.test_nmse = nmse;
  r.test_rmse = rmse;
  r.expression = "(x + x)";
  r.candidates = 1300;
  r.iterations = 1;
  r.early_exit = recovered;
  r.wall_seconds = wall;
  return r;
}

std::string temp_dir() {
  static int counter = 0;
  const std::string dir = (std::filesystem::temp_directory_path() /
                           ("symreg_test_" + std::to_string(::getpid()) +
                            "_" + std::to_string(counter++)))
                              .string();
  std::filesystem::create_directories(dir);
  return dir;
}

const BenchmarkSpec& nguyen1() {
  static const std::vector<BenchmarkSpec> specs = load_benchmark_dir();
  const BenchmarkSpec* s = find_benchmark(specs, "Nguyen-1");
  REQUIRE(s != nullptr);
  return *s;
}

}  // namespace

TEST_CASE("a single run produces a complete, consistent record") {
  const RunRecord rec = run_single(nguyen1(), quick_config(), 1);
  CHECK(rec.benchmark == "Nguyen-1");
  CHECK(rec.seed == 1);
  CHECK(rec.candidates > 0);
  CHECK(rec.candidates <= 50000 + 600);  // budget plus one started iteration
  CHECK(rec.iterations >= 1);
  CHECK(rec.best_reward > 0.0);
  CHECK(rec.best_reward <= 1.0);
  CHECK(rec.wall_seconds > 0.0);
  CHECK(!rec.expression.empty());
  CHECK(!rec.prover.empty());

  // the best expression must parse back against the benchmark library
  TokenLibrary lib = TokenLibrary::from_names(nguyen1().library);
  CHECK_NOTHROW(parse_infix(rec.expression, lib, false));

  if (rec.recovered) {
    CHECK(rec.train_nrmse <= 1e-10);
    CHECK(rec.test_nmse <= 1e-10);
  }
}

TEST_CASE("experiment results are ordered and deterministic across workers") {
  const std::vector<std::uint64_t> seeds = {1, 2};
  const auto specs = std::vector<BenchmarkSpec>{nguyen1()};
  const ExperimentReport serial = run_experiment(specs, quick_config(), seeds,
                                                 /*workers=*/1);
  const ExperimentReport parallel = run_experiment(specs, quick_config(),
                                                   seeds, /*workers=*/2);
  REQUIRE(serial.runs.size() == 2);
  REQUIRE(parallel.runs.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(serial.runs[i].seed == seeds[i]);
    CHECK(serial.runs[i].recovered == parallel.runs[i].recovered);
    CHECK(serial.runs[i].candidates == parallel.runs[i].candidates);
    CHECK(serial.runs[i].best_reward == parallel.runs[i].best_reward);
    CHECK(serial.runs[i].expression == parallel.runs[i].expression);
    CHECK(serial.runs[i].test_nmse == parallel.runs[i].test_nmse);
  }
  REQUIRE(serial.benchmarks.size() == 1);
  CHECK(serial.benchmarks[0].n_runs == 2);
  CHECK(serial.benchmarks[0].recovery_pct ==
        parallel.benchmarks[0].recovery_pct);
}

TEST_CASE("aggregation: recovery rates, extrema, and the interval") {
  std::vector<RunRecord> runs;
  runs.push_back(synthetic("B", 2, false, 0.5, 0.7, 4.0));
  runs.push_back(synthetic("A", 1, true, 1e-30, 1e-15, 1.0));
  runs.push_back(synthetic("A", 2, true, 1e-28, 2e-15, 3.0));
  runs.push_back(synthetic("C", 1, false, 0.9, 1.1, 2.0));
  runs.push_back(synthetic("C", 2, false, 0.8, 0.9, 2.0));
  runs.push_back(synthetic("B", 1, true, 1e-20, 3e-11, 2.0));

  const ExperimentReport rep = aggregate_runs(std::move(runs));
  REQUIRE(rep.benchmarks.size() == 3);
  CHECK(rep.benchmarks[0].name == "A");
  CHECK(rep.benchmarks[1].name == "B");
  CHECK(rep.benchmarks[2].name == "C");
  CHECK(rep.runs[0].seed == 1);  // sorted by (benchmark, seed)
  CHECK(rep.runs[1].seed == 2);

  CHECK(rep.benchmarks[0].recovery_pct == 100.0);
  CHECK(rep.benchmarks[1].recovery_pct == 50.0);
  CHECK(rep.benchmarks[2].recovery_pct == 0.0);
  CHECK(rep.benchmarks[0].min_test_nmse == 1e-30);
  CHECK(rep.benchmarks[1].min_test_nmse == 1e-20);
  CHECK(rep.benchmarks[0].mean_runtime_s == 2.0);
  CHECK(rep.benchmarks[1].median_test_rmse ==
        doctest::Approx(0.5 * (3e-11 + 0.7)));
  CHECK(rep.benchmarks[1].mean_test_nmse == doctest::Approx(0.5 * (1e-20 + 0.5)));

  // binomial half-widths: p(1-p) is 0 for the sweeps, 0.25 for the split
  CHECK(rep.benchmarks[0].ci95_binomial_pct == 0.0);
  CHECK(rep.benchmarks[2].ci95_binomial_pct == 0.0);
  CHECK(rep.benchmarks[1].ci95_binomial_pct ==
        doctest::Approx(196.0 * std::sqrt(0.25 / 2.0)));

  // mean of {100, 50, 0} is 50; sample sd is 50; half-width 1.96 * 50 / sqrt(3)
  CHECK(rep.mean_recovery_pct == doctest::Approx(50.0));
  CHECK(rep.ci95_recovery_pct == doctest::Approx(1.96 * 50.0 / std::sqrt(3.0)));
}

TEST_CASE("aggregation with one benchmark has no interval") {
  std::vector<RunRecord> runs = {synthetic("A", 1, true, 0.0, 0.0)};
  const ExperimentReport rep = aggregate_runs(std::move(runs));
  CHECK(rep.mean_recovery_pct == 100.0);
  CHECK(rep.ci95_recovery_pct == 0.0);
}

TEST_CASE("jsonl round trip preserves every field, infinities included") {
  std::vector<RunRecord> runs;
  runs.push_back(synthetic("A", 1, true, 1e-30, 1e-15));
  RunRecord inf_rec = synthetic("B", 7, false, 0.0, 0.0);
  inf_rec.test_nmse = std::numeric_limits<double>::infinity();
  inf_rec.test_rmse = std::numeric_limits<double>::infinity();
  inf_rec.train_nrmse = std::numeric_limits<double>::infinity();
  inf_rec.expression = "(x / (x - x))";
  runs.push_back(inf_rec);

  const std::string dir = temp_dir();
  const std::string path = dir + "/runs.jsonl";
  write_runs_jsonl(path, runs);
  const std::vector<RunRecord> back = read_runs_jsonl(path);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].benchmark == runs[i].benchmark);
    CHECK(back[i].seed == runs[i].seed);
    CHECK(back[i].recovered == runs[i].recovered);
    CHECK(back[i].prover == runs[i].prover);
    CHECK(back[i].best_reward == runs[i].best_reward);
    CHECK(back[i].expression == runs[i].expression);
    CHECK(back[i].candidates == runs[i].candidates);
    CHECK(back[i].iterations == runs[i].iterations);
    CHECK(back[i].early_exit == runs[i].early_exit);
    CHECK(back[i].wall_seconds == runs[i].wall_seconds);
  }
  CHECK(back[0].test_nmse == 1e-30);
  CHECK(std::isinf(back[1].test_nmse));
  CHECK(std::isinf(back[1].test_rmse));
  CHECK(std::isinf(back[1].train_nrmse));
  std::filesystem::remove_all(dir);
}

TEST_CASE("summary csv carries the agreed columns") {
  std::vector<RunRecord> runs = {synthetic("A", 1, true, 2.5e-4, 1e-2, 12.5),
                                 synthetic("A", 2, false, 0.5, 0.7, 7.5)};
  const ExperimentReport rep = aggregate_runs(std::move(runs));
  const std::string dir = temp_dir();
  const std::string path = dir + "/summary.csv";
  write_summary_csv(path, rep);

  std::ifstream in(path);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK(header == "benchmark,n_runs,recovery_pct,min_nmse,mean_runtime_s");
  CHECK(row == "A,2,50,0.00025,10");
  std::filesystem::remove_all(dir);
}

TEST_CASE("worker default honours the environment override") {
  ::setenv("SR_WORKERS", "3", 1);
  CHECK(default_workers() == 3);
  ::setenv("SR_WORKERS", "junk", 1);
  CHECK(default_workers() >= 1);
  ::unsetenv("SR_WORKERS");
  CHECK(default_workers() >= 1);
}

TEST_CASE("a failing benchmark surfaces as an error, not a silent skip") {
  BenchmarkSpec bad;
  bad.name = "bad";
  bad.expression = "nope(";
  bad.library = {"add", "x"};
  bad.train = DatasetRule{'U', 0.0, 1.0, 10};
  bad.test = bad.train;
  CHECK_THROWS(run_experiment({bad}, quick_config(), {1}));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(run_experiment({}, quick_config(), {1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment({nguyen1()}, quick_config(), {}),
                  std::invalid_argument);
}
