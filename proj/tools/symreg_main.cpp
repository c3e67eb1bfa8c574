// Command line front end: run experiments over the benchmark suite, list
// benchmarks, verify a hand-written candidate, or re-aggregate stored runs.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symreg/benchmarks.hpp"
#include "symreg/experiment.hpp"
#include "symreg/infix.hpp"
#include "symreg/recovery.hpp"

namespace {

using namespace symreg;

struct RunOptions {
  std::string benchmark = "all";
  int n_seeds = 1;
  std::vector<std::uint64_t> seed_list;
  std::string out_dir = "runs";
  std::string trainer = "pqt";
  std::string ablations;
  int workers = 0;
  bool no_early_exit = false;
  SearchConfig cfg;
};

void apply_ablations(const std::string& csv, AblationFlags* flags) {
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "disable_gp") flags->disable_gp = true;
    else if (item == "disable_rnn_training") flags->disable_rnn_training = true;
    else if (item == "random_seed_population") flags->random_seed_population = true;
    else if (item == "exclude_rnn_from_training") flags->exclude_rnn_from_training = true;
    else if (item == "exclude_gp_from_training") flags->exclude_gp_from_training = true;
    else if (item == "uniform_mutation_only") flags->uniform_mutation_only = true;
    else if (item == "drop_constraints") flags->drop_constraints = true;
    else throw CLI::ValidationError("--ablation", "unknown flag: " + item);
  }
}

std::vector<std::uint64_t> resolve_seeds(const RunOptions& opt) {
  if (!opt.seed_list.empty()) return opt.seed_list;
  std::vector<std::uint64_t> seeds;
  for (int i = 1; i <= opt.n_seeds; ++i) seeds.push_back(i);
  return seeds;
}

void add_search_flags(CLI::App* cmd, RunOptions* opt) {
  cmd->add_option("--batch-size", opt->cfg.batch_size,
                  "expressions sampled per iteration");
  cmd->add_option("--gp-generations", opt->cfg.generations,
                  "inner evolution steps per iteration");
  cmd->add_option("--top-m", opt->cfg.top_m,
                  "evolved samples joined into the training set");
  cmd->add_option("--budget", opt->cfg.budget,
                  "total candidate expressions per run");
  cmd->add_option("--trainer", opt->trainer, "pqt, vpg, or rspg");
  cmd->add_option("--learning-rate", opt->cfg.learning_rate, "Adam step size");
  cmd->add_option("--entropy-weight", opt->cfg.entropy_weight,
                  "exploration bonus coefficient");
  cmd->add_option("--risk-epsilon", opt->cfg.risk_epsilon,
                  "top quantile used by the rspg trainer");
  cmd->add_option("--pqt-k", opt->cfg.pqt_k, "priority queue capacity");
  cmd->add_option("--hidden", opt->cfg.hidden_size, "recurrent state width");
  cmd->add_option("--min-length", opt->cfg.omega.min_length,
                  "shortest admissible expression");
  cmd->add_option("--max-length", opt->cfg.omega.max_length,
                  "longest admissible expression");
  cmd->add_option("--max-constants", opt->cfg.omega.max_constants,
                  "optimizable constants per expression");
  cmd->add_option("--p-crossover", opt->cfg.gp.p_crossover,
                  "pairwise crossover probability");
  cmd->add_option("--p-mutate", opt->cfg.gp.p_mutate,
                  "per-child mutation probability");
  cmd->add_option("--tournament-size", opt->cfg.gp.tournament_size,
                  "selection tournament size");
  cmd->add_option("--ablation", opt->ablations,
                  "comma separated component switches");
  cmd->add_flag("--no-early-exit", opt->no_early_exit,
                "always spend the full budget");
  cmd->add_option("--early-exit-nrmse", opt->cfg.early_exit_nrmse,
                  "training error that counts as an exact fit");
  cmd->set_config("--config", "", "key=value file; flags override it");
}

SearchConfig finalize_config(RunOptions* opt) {
  opt->cfg.trainer = trainer_from_name(opt->trainer);
  opt->cfg.early_exit = !opt->no_early_exit;
  apply_ablations(opt->ablations, &opt->cfg.ablations);
  opt->cfg.gp.omega = opt->cfg.omega;
  return opt->cfg;
}

int cmd_list(const std::string& dir) {
  const auto specs = load_benchmark_dir(dir);
  std::printf("%-14s %-4s %-26s %s\n", "name", "vars", "train points",
              "expression");
  for (const BenchmarkSpec& s : specs) {
    const int vars =
        std::find(s.library.begin(), s.library.end(), "y") != s.library.end()
            ? 2
            : 1;
    char points[64];
    std::snprintf(points, sizeof(points), "%c(%g, %g, %lld)", s.train.kind,
                  s.train.lo, s.train.hi, s.train.count);
    std::printf("%-14s %-4d %-26s %s\n", s.name.c_str(), vars, points,
                s.expression.c_str());
  }
  std::printf("%zu benchmarks\n", specs.size());
  return 0;
}

int cmd_run(RunOptions* opt, const std::string& dir) {
  const SearchConfig cfg = finalize_config(opt);
  const auto specs = select_benchmarks(load_benchmark_dir(dir), opt->benchmark);
  const auto seeds = resolve_seeds(*opt);

  std::filesystem::create_directories(opt->out_dir);
  std::printf("%zu benchmark(s) x %zu seed(s), budget %lld, trainer %s\n",
              specs.size(), seeds.size(),
              static_cast<long long>(cfg.budget), trainer_name(cfg.trainer));

  const ExperimentReport rep = run_experiment(
      specs, cfg, seeds, opt->workers, [](const RunRecord& r) {
        std::printf("  %-14s seed %-4llu %s  reward %.6f  %lld candidates  "
                    "%.1fs\n",
                    r.benchmark.c_str(),
                    static_cast<unsigned long long>(r.seed),
                    r.recovered ? "recovered" : "not recovered",
                    r.best_reward, static_cast<long long>(r.candidates),
                    r.wall_seconds);
        std::fflush(stdout);
      });

  const std::string jsonl = opt->out_dir + "/runs.jsonl";
  const std::string csv = opt->out_dir + "/summary.csv";
  write_runs_jsonl(jsonl, rep.runs);
  write_summary_csv(csv, rep);
  std::printf("\n%s", render_report(rep).c_str());
  std::printf("wrote %s and %s\n", jsonl.c_str(), csv.c_str());
  return 0;
}

int cmd_verify(const std::string& name, const std::string& candidate,
               std::uint64_t data_seed, const std::string& dir) {
  const auto specs = load_benchmark_dir(dir);
  const BenchmarkSpec* spec = find_benchmark(specs, name);
  if (spec == nullptr) {
    std::fprintf(stderr, "unknown benchmark: %s\n", name.c_str());
    return 2;
  }
  const InstantiatedBenchmark bench = instantiate_benchmark(*spec, data_seed);
  TokenLibrary cand_lib = bench.lib;
  Traversal cand;
  try {
    cand = parse_infix(candidate, cand_lib, /*extend=*/true);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "cannot parse candidate: %s\n", e.what());
    return 2;
  }
  const RecoveryCheck check =
      check_recovery(bench.truth_lib, bench.truth, cand_lib, cand, {},
                     bench.data.domain);
  const ErrorMetrics test = error_metrics(cand_lib, cand, {}, bench.data,
                                          Split::kTest);
  std::printf("benchmark:  %s\n", spec->name.c_str());
  std::printf("truth:      %s\n", spec->expression.c_str());
  std::printf("candidate:  %s\n", format_infix(cand_lib, cand).c_str());
  std::printf("recovered:  %s\n", check.recovered ? "yes" : "no");
  std::printf("checked on: %d points\n", check.points_compared);
  std::printf("symbolic:   %s\n", prove_result_name(check.prover));
  std::printf("test NMSE:  %.6g\n", test.nmse);
  return check.recovered ? 0 : 1;
}

int cmd_report(const std::string& in_dir) {
  const ExperimentReport rep =
      aggregate_runs(read_runs_jsonl(in_dir + "/runs.jsonl"));
  std::printf("%s", render_report(rep).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic regression engine and benchmark harness"};
  app.require_subcommand(1);
  std::string bench_dir;  // empty means the directory baked into the build
  app.add_option("--benchmark-dir", bench_dir,
                 "load benchmark specs from this directory")
      ->envname("SR_BENCHMARK_DIR");

  RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "search one or more benchmarks");
  run->add_option("--benchmark", opt.benchmark,
                  "name, suite (nguyen, livermore, jin, neat, r, main37), "
                  "or all");
  run->add_option("--seeds", opt.n_seeds, "run seeds 1..N");
  run->add_option("--seed-list", opt.seed_list,
                  "explicit seeds, overrides --seeds");
  run->add_option("--out", opt.out_dir, "output directory");
  run->add_option("--workers", opt.workers,
                  "parallel runs (default: SR_WORKERS or all cores)");
  add_search_flags(run, &opt);

  CLI::App* list = app.add_subcommand("list-benchmarks",
                                      "print the benchmark registry");

  std::string verify_benchmark, verify_candidate;
  std::uint64_t verify_seed = 1;
  CLI::App* verify = app.add_subcommand(
      "verify", "check a hand-written expression against a benchmark");
  verify->add_option("--benchmark", verify_benchmark, "benchmark name")
      ->required();
  verify->add_option("--candidate", verify_candidate, "infix expression")
      ->required();
  verify->add_option("--data-seed", verify_seed, "dataset seed");

  std::string report_dir;
  CLI::App* report = app.add_subcommand(
      "report", "aggregate stored runs.jsonl into a summary");
  report->add_option("--in", report_dir, "directory with runs.jsonl")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list(bench_dir);
    if (run->parsed()) return cmd_run(&opt, bench_dir);
    if (verify->parsed()) {
      return cmd_verify(verify_benchmark, verify_candidate, verify_seed,
                        bench_dir);
    }
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
