#include "symreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "symreg/infix.hpp"
#include "symreg/recovery.hpp"

namespace symreg {
namespace {

using nlohmann::json;

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

json to_json(const RunRecord& r) {
  return json{{"benchmark", r.benchmark},
              {"seed", r.seed},
              {"recovered", r.recovered},
              {"prover", r.prover},
              {"best_reward", r.best_reward},
              {"train_nrmse", r.train_nrmse},
              {"test_nmse", r.test_nmse},
              {"test_rmse", r.test_rmse},
              {"expression", r.expression},
              {"candidates", r.candidates},
              {"iterations", r.iterations},
              {"early_exit", r.early_exit},
              {"wall_seconds", r.wall_seconds}};
}

RunRecord from_json(const json& j) {
  RunRecord r;
  r.benchmark = j.at("benchmark").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.recovered = j.at("recovered").get<bool>();
  r.prover = j.value("prover", "");
  r.best_reward = j.at("best_reward").get<double>();
  r.train_nrmse = j.at("train_nrmse").get<double>();
  r.test_nmse = j.at("test_nmse").get<double>();
  r.test_rmse = j.at("test_rmse").get<double>();
  r.expression = j.value("expression", "");
  r.candidates = j.at("candidates").get<std::int64_t>();
  r.iterations = j.value("iterations", 0);
  r.early_exit = j.value("early_exit", false);
  r.wall_seconds = j.value("wall_seconds", 0.0);
  return r;
}

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("SR_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

RunRecord run_single(const BenchmarkSpec& spec, const SearchConfig& cfg,
                     std::uint64_t seed) {
  const InstantiatedBenchmark bench = instantiate_benchmark(spec, seed);
  const SearchResult res = run_search(bench.lib, bench.data, cfg, seed);

  RunRecord rec;
  rec.benchmark = spec.name;
  rec.seed = seed;
  rec.best_reward = res.best_fitness.reward;
  rec.train_nrmse = res.best_fitness.nrmse;
  rec.expression = format_infix(bench.lib, res.best, res.best_fitness.consts);
  rec.candidates = res.candidates;
  rec.iterations = static_cast<int>(res.iterations.size());
  rec.early_exit = res.early_exit;
  rec.wall_seconds = res.wall_seconds;

  const ErrorMetrics test = error_metrics(bench.lib, res.best,
                                          res.best_fitness.consts, bench.data,
                                          Split::kTest);
  rec.test_nmse = test.nmse;
  rec.test_rmse = test.rmse;

  const RecoveryCheck check =
      is_recovered(bench, res.best, res.best_fitness.consts);
  rec.recovered = check.recovered;
  rec.prover = prove_result_name(check.prover);
  return rec;
}

ExperimentReport run_experiment(
    const std::vector<BenchmarkSpec>& specs, const SearchConfig& cfg,
    const std::vector<std::uint64_t>& seeds, int workers,
    const std::function<void(const RunRecord&)>& progress) {
  if (specs.empty()) throw std::invalid_argument("no benchmarks selected");
  if (seeds.empty()) throw std::invalid_argument("no seeds given");

  struct Job {
    const BenchmarkSpec* spec;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  jobs.reserve(specs.size() * seeds.size());
  for (const BenchmarkSpec& spec : specs) {
    for (std::uint64_t seed : seeds) jobs.push_back({&spec, seed});
  }

  std::vector<RunRecord> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::string first_error;

  const int n_workers =
      std::max(1, std::min(workers > 0 ? workers : default_workers(),
                           static_cast<int>(jobs.size())));
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = run_single(*jobs[i].spec, cfg, jobs[i].seed);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        if (first_error.empty()) {
          first_error = jobs[i].spec->name + ": " + e.what();
        }
        continue;
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(results[i]);
      }
    }
  };

  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (!first_error.empty()) {
    throw std::runtime_error("experiment run failed: " + first_error);
  }
  return aggregate_runs(std::move(results));
}

ExperimentReport aggregate_runs(std::vector<RunRecord> runs) {
  ExperimentReport rep;
  rep.runs = std::move(runs);
  std::stable_sort(rep.runs.begin(), rep.runs.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     if (a.benchmark != b.benchmark) {
                       return a.benchmark < b.benchmark;
                     }
                     return a.seed < b.seed;
                   });

  for (std::size_t i = 0; i < rep.runs.size();) {
    std::size_t j = i;
    while (j < rep.runs.size() &&
           rep.runs[j].benchmark == rep.runs[i].benchmark) {
      ++j;
    }
    BenchmarkSummary s;
    s.name = rep.runs[i].benchmark;
    s.n_runs = static_cast<int>(j - i);
    std::vector<double> nmses, rmses, runtimes;
    s.min_test_nmse = std::numeric_limits<double>::infinity();
    for (std::size_t k = i; k < j; ++k) {
      const RunRecord& r = rep.runs[k];
      if (r.recovered) ++s.n_recovered;
      s.min_test_nmse = std::min(s.min_test_nmse, r.test_nmse);
      nmses.push_back(r.test_nmse);
      rmses.push_back(r.test_rmse);
      runtimes.push_back(r.wall_seconds);
    }
    s.recovery_pct = 100.0 * s.n_recovered / static_cast<double>(s.n_runs);
    const double p = s.recovery_pct / 100.0;
    s.ci95_binomial_pct =
        196.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(s.n_runs));
    s.mean_test_nmse = mean_of(nmses);
    s.mean_test_rmse = mean_of(rmses);
    s.median_test_rmse = median_of(rmses);
    s.mean_runtime_s = mean_of(runtimes);
    rep.benchmarks.push_back(std::move(s));
    i = j;
  }

  std::vector<double> rates;
  rates.reserve(rep.benchmarks.size());
  for (const BenchmarkSummary& s : rep.benchmarks) {
    rates.push_back(s.recovery_pct);
  }
  rep.mean_recovery_pct = mean_of(rates);
  if (rates.size() >= 2) {
    double ss = 0.0;
    for (double r : rates) {
      ss += (r - rep.mean_recovery_pct) * (r - rep.mean_recovery_pct);
    }
    const double sd = std::sqrt(ss / static_cast<double>(rates.size() - 1));
    rep.ci95_recovery_pct =
        1.96 * sd / std::sqrt(static_cast<double>(rates.size()));
  }
  return rep;
}

void write_runs_jsonl(const std::string& path,
                      const std::vector<RunRecord>& runs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const RunRecord& r : runs) {
    json j = to_json(r);
    // JSON has no inf; store as a sentinel string the reader understands.
    if (!std::isfinite(r.test_nmse)) j["test_nmse"] = "inf";
    if (!std::isfinite(r.test_rmse)) j["test_rmse"] = "inf";
    if (!std::isfinite(r.train_nrmse)) j["train_nrmse"] = "inf";
    out << j.dump() << "\n";
  }
}

std::vector<RunRecord> read_runs_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<RunRecord> runs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    for (const char* key : {"test_nmse", "test_rmse", "train_nrmse"}) {
      if (j.contains(key) && j[key].is_string()) {
        j[key] = std::numeric_limits<double>::infinity();
      }
    }
    runs.push_back(from_json(j));
  }
  return runs;
}

void write_summary_csv(const std::string& path, const ExperimentReport& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "benchmark,n_runs,recovery_pct,min_nmse,mean_runtime_s\n";
  for (const BenchmarkSummary& s : rep.benchmarks) {
    out << s.name << "," << s.n_runs << "," << s.recovery_pct << ","
        << s.min_test_nmse << "," << s.mean_runtime_s << "\n";
  }
}

std::string render_report(const ExperimentReport& rep) {
  std::ostringstream out;
  out << "benchmark            runs  recov%  +/-95%   min NMSE     "
         "mean RMSE    median RMSE  mean s\n";
  char line[160];
  for (const BenchmarkSummary& s : rep.benchmarks) {
    std::snprintf(line, sizeof(line),
                  "%-20s %4d  %6.1f  %6.1f   %-10.4g   %-10.4g   %-10.4g   "
                  "%.1f\n",
                  s.name.c_str(), s.n_runs, s.recovery_pct,
                  s.ci95_binomial_pct, s.min_test_nmse, s.mean_test_rmse,
                  s.median_test_rmse, s.mean_runtime_s);
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "mean recovery %.1f%% +/- %.1f (95%% CI over benchmarks)\n",
                rep.mean_recovery_pct, rep.ci95_recovery_pct);
  out << line;
  return out.str();
}

}  // namespace symreg
