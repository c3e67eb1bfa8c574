#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symreg/dataset.hpp"
#include "symreg/token.hpp"
#include "symreg/traversal.hpp"

namespace symreg {

// How one split of a benchmark dataset is sampled.  "U" draws `count` rows
// with every variable uniform in [lo, hi]; "E" takes `count` rows with every
// variable on the same evenly spaced grid.
struct DatasetRule {
  char kind = 'U';
  double lo = 0.0;
  double hi = 1.0;
  long long count = 0;
};

struct BenchmarkSpec {
  std::string name;
  std::string expression;  // ground truth, infix
  std::vector<std::string> library;
  DatasetRule train;
  DatasetRule test;  // equals train unless the spec file overrides it
};

// A benchmark made concrete: the search library, the ground truth parsed
// into a (possibly extended) evaluation library, and the sampled dataset.
struct InstantiatedBenchmark {
  BenchmarkSpec spec;
  TokenLibrary lib;        // what the engine searches over
  TokenLibrary truth_lib;  // lib plus any tokens only the ground truth needs
  Traversal truth;
  Dataset data;
};

BenchmarkSpec load_benchmark_file(const std::string& path);

// Loads every *.json under the directory, sorted by benchmark name.
// `dir` defaults to the tree shipped with the project.
std::vector<BenchmarkSpec> load_benchmark_dir(const std::string& dir = {});

// nullptr when absent; lookup is exact on the name.
const BenchmarkSpec* find_benchmark(const std::vector<BenchmarkSpec>& specs,
                                    const std::string& name);

// Expands a name, "all", or a suite prefix ("nguyen", "r", "livermore",
// "jin", "neat", "main37") into concrete specs.
std::vector<BenchmarkSpec> select_benchmarks(
    const std::vector<BenchmarkSpec>& specs, const std::string& selector);

// Samples both splits (U-rule train and test use different derived seeds),
// evaluates the ground truth for the targets, and resamples any row where
// the truth is non-finite.
InstantiatedBenchmark instantiate_benchmark(const BenchmarkSpec& spec,
                                            std::uint64_t data_seed);

}  // namespace symreg
