#include "symreg/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "symreg/eval.hpp"
#include "symreg/infix.hpp"
#include "symreg/rng.hpp"

namespace symreg {
namespace {

using nlohmann::json;

DatasetRule parse_rule(const json& j, const std::string& where) {
  DatasetRule r;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "U" && kind != "E") {
    throw std::invalid_argument(where + ": dataset kind must be U or E");
  }
  r.kind = kind[0];
  r.lo = j.at("lo").get<double>();
  r.hi = j.at("hi").get<double>();
  r.count = j.at("count").get<long long>();
  if (!(r.lo < r.hi)) {
    throw std::invalid_argument(where + ": dataset bounds need lo < hi");
  }
  if (r.count < 2) {
    throw std::invalid_argument(where + ": dataset needs at least 2 points");
  }
  return r;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Column-major fill: all rows of variable 0, then variable 1, ...  A fixed
// draw order keeps datasets reproducible across library permutations.
Eigen::MatrixXd sample_uniform(const DatasetRule& r, int n_vars, Rng& rng) {
  Eigen::MatrixXd x(r.count, n_vars);
  for (int v = 0; v < n_vars; ++v) {
    for (long long i = 0; i < r.count; ++i) {
      x(i, v) = rng.uniform(r.lo, r.hi);
    }
  }
  return x;
}

// Every variable shares the same evenly spaced grid, endpoints included.
Eigen::MatrixXd sample_grid(const DatasetRule& r, int n_vars) {
  Eigen::MatrixXd x(r.count, n_vars);
  const double step = (r.hi - r.lo) / static_cast<double>(r.count - 1);
  for (long long i = 0; i < r.count; ++i) {
    const double value = r.lo + step * static_cast<double>(i);
    for (int v = 0; v < n_vars; ++v) x(i, v) = value;
  }
  return x;
}

}  // namespace

BenchmarkSpec load_benchmark_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open benchmark file: " + path);
  json j = json::parse(in);

  BenchmarkSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.expression = j.at("expression").get<std::string>();
  spec.library = j.at("library").get<std::vector<std::string>>();
  spec.train = parse_rule(j.at("train"), spec.name + " train");
  spec.test = j.contains("test") ? parse_rule(j.at("test"), spec.name + " test")
                                 : spec.train;
  if (spec.library.empty()) {
    throw std::invalid_argument(spec.name + ": empty library");
  }
  return spec;
}

std::vector<BenchmarkSpec> load_benchmark_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string root = dir.empty() ? std::string(SYMREG_BENCHMARK_DIR) : dir;
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
  }
  std::vector<BenchmarkSpec> specs;
  specs.reserve(paths.size());
  for (const std::string& p : paths) specs.push_back(load_benchmark_file(p));
  std::sort(specs.begin(), specs.end(),
            [](const BenchmarkSpec& a, const BenchmarkSpec& b) {
              return a.name < b.name;
            });
  for (std::size_t i = 1; i < specs.size(); ++i) {
    if (specs[i].name == specs[i - 1].name) {
      throw std::runtime_error("duplicate benchmark name: " + specs[i].name);
    }
  }
  return specs;
}

const BenchmarkSpec* find_benchmark(const std::vector<BenchmarkSpec>& specs,
                                    const std::string& name) {
  for (const BenchmarkSpec& s : specs) {
    if (s.name == name) return &s;
  }
  const std::string want = lower(name);
  for (const BenchmarkSpec& s : specs) {
    if (lower(s.name) == want) return &s;
  }
  return nullptr;
}

std::vector<BenchmarkSpec> select_benchmarks(
    const std::vector<BenchmarkSpec>& specs, const std::string& selector) {
  const std::string sel = lower(selector);
  auto by_prefix = [&](const char* prefix) {
    std::vector<BenchmarkSpec> out;
    for (const BenchmarkSpec& s : specs) {
      if (s.name.rfind(prefix, 0) == 0) out.push_back(s);
    }
    return out;
  };
  if (sel == "all") return specs;
  if (sel == "nguyen") return by_prefix("Nguyen");
  if (sel == "r") return by_prefix("R-");
  if (sel == "livermore") return by_prefix("Livermore");
  if (sel == "jin") return by_prefix("Jin");
  if (sel == "neat") return by_prefix("Neat");
  if (sel == "main37" || sel == "standard41") {
    std::vector<BenchmarkSpec> out;
    for (const BenchmarkSpec& s : specs) {
      const bool standard = s.name.rfind("Nguyen", 0) == 0 ||
                            s.name.rfind("R-", 0) == 0 ||
                            s.name.rfind("Livermore", 0) == 0;
      if (!standard) continue;
      if (sel == "main37" && s.name.back() == '*') continue;
      out.push_back(s);
    }
    return out;
  }
  if (const BenchmarkSpec* s = find_benchmark(specs, selector)) return {*s};
  throw std::invalid_argument("unknown benchmark or suite: " + selector);
}

InstantiatedBenchmark instantiate_benchmark(const BenchmarkSpec& spec,
                                            std::uint64_t data_seed) {
  InstantiatedBenchmark out;
  out.spec = spec;
  out.lib = TokenLibrary::from_names(spec.library);
  out.truth_lib = out.lib;
  out.truth = parse_infix(spec.expression, out.truth_lib, /*extend=*/true);
  if (count_constants(out.truth_lib, out.truth) != 0) {
    throw std::invalid_argument(spec.name +
                                ": ground truth may not contain const "
                                "placeholders, only literal values");
  }

  const int n_vars = out.lib.n_variables();
  if (n_vars < 1) {
    throw std::invalid_argument(spec.name + ": library has no variables");
  }

  // U splits get independent streams; an E split is a fixed grid, so train
  // and test coincide whenever their rules match.
  auto build = [&](const DatasetRule& rule, std::uint64_t stream,
                   Eigen::MatrixXd* x, Eigen::VectorXd* y) {
    Rng rng(Rng::mix(data_seed, stream));
    *x = rule.kind == 'U' ? sample_uniform(rule, n_vars, rng)
                          : sample_grid(rule, n_vars);
    *y = evaluate(out.truth_lib, out.truth, *x).values;
    std::vector<double> row(n_vars);
    for (long long i = 0; i < rule.count; ++i) {
      int tries = 0;
      while (!std::isfinite((*y)(i))) {
        if (rule.kind == 'E') {
          throw std::runtime_error(spec.name +
                                   ": ground truth non-finite on grid point");
        }
        if (++tries > 1000) {
          throw std::runtime_error(spec.name +
                                   ": cannot sample a finite training point");
        }
        for (int v = 0; v < n_vars; ++v) {
          row[v] = rng.uniform(rule.lo, rule.hi);
          x->coeffRef(i, v) = row[v];
        }
        (*y)(i) = evaluate_row(out.truth_lib, out.truth, row.data());
      }
    }
  };

  build(spec.train, 0xda7a'0001ULL, &out.data.x_train, &out.data.y_train);
  build(spec.test, 0xda7a'0002ULL, &out.data.x_test, &out.data.y_test);

  out.data.name = spec.name;
  const double mean = out.data.y_train.mean();
  out.data.sigma_y = std::sqrt(
      (out.data.y_train.array() - mean).square().mean());
  out.data.domain.assign(n_vars, Interval{spec.train.lo, spec.train.hi});
  return out;
}

}  // namespace symreg
