#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "symreg/benchmarks.hpp"
#include "symreg/eval.hpp"
#include "symreg/infix.hpp"

using namespace symreg;

namespace {

const std::vector<BenchmarkSpec>& registry() {
  static const std::vector<BenchmarkSpec> specs = load_benchmark_dir();
  return specs;
}

int count_prefix(const std::string& prefix) {
  int n = 0;
  for (const BenchmarkSpec& s : registry()) {
    if (s.name.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

bool same(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("registry holds every benchmark family in full") {
  const auto& specs = registry();
  CHECK(specs.size() == 56);
  CHECK(count_prefix("Nguyen-") == 13);  // 12 plus the wide-domain variant
  CHECK(count_prefix("R-") == 6);        // 3 plus the wide-domain variants
  CHECK(count_prefix("Livermore-") == 22);
  CHECK(count_prefix("Jin-") == 6);
  CHECK(count_prefix("Neat-") == 9);

  int starred = 0;
  for (const BenchmarkSpec& s : specs) {
    if (s.name.back() == '*') ++starred;
  }
  CHECK(starred == 4);

  std::set<std::string> names;
  for (const BenchmarkSpec& s : specs) names.insert(s.name);
  CHECK(names.size() == specs.size());
}

TEST_CASE("every ground truth parses against its own library") {
  for (const BenchmarkSpec& spec : registry()) {
    CAPTURE(spec.name);
    TokenLibrary lib = TokenLibrary::from_names(spec.library);
    TokenLibrary truth_lib = lib;
    Traversal truth;
    CHECK_NOTHROW(truth = parse_infix(spec.expression, truth_lib, true));
    CHECK(is_complete(truth_lib, truth));
    CHECK(count_constants(truth_lib, truth) == 0);
  }
}

TEST_CASE("every benchmark instantiates with finite data") {
  for (const BenchmarkSpec& spec : registry()) {
    CAPTURE(spec.name);
    const InstantiatedBenchmark b = instantiate_benchmark(spec, 17);
    CHECK(b.data.x_train.rows() == spec.train.count);
    CHECK(b.data.x_test.rows() == spec.test.count);
    CHECK(b.data.y_train.allFinite());
    CHECK(b.data.y_test.allFinite());
    CHECK(b.data.sigma_y > 0.0);
    CHECK(b.data.n_variables() == b.lib.n_variables());
    for (int v = 0; v < b.data.n_variables(); ++v) {
      CHECK(b.data.x_train.col(v).minCoeff() >= spec.train.lo);
      CHECK(b.data.x_train.col(v).maxCoeff() <= spec.train.hi);
    }
  }
}

TEST_CASE("uniform rule draws fresh points per split and per seed") {
  const BenchmarkSpec* spec = find_benchmark(registry(), "Nguyen-1");
  REQUIRE(spec != nullptr);
  CHECK(spec->train.kind == 'U');
  CHECK(spec->train.lo == -1.0);
  CHECK(spec->train.hi == 1.0);
  CHECK(spec->train.count == 20);
  CHECK(spec->library.size() == 9);

  const InstantiatedBenchmark a = instantiate_benchmark(*spec, 1);
  const InstantiatedBenchmark b = instantiate_benchmark(*spec, 2);
  CHECK(!same(a.data.x_train, b.data.x_train));          // seed changes data
  CHECK(!same(a.data.x_train, a.data.x_test));           // splits independent
  const InstantiatedBenchmark a2 = instantiate_benchmark(*spec, 1);
  CHECK(same(a.data.x_train, a2.data.x_train));         // same seed, same data
  CHECK(same(a.data.y_train, a2.data.y_train));

  // y really is the ground truth evaluated at x
  for (int i = 0; i < 20; ++i) {
    const double x = a.data.x_train(i, 0);
    CHECK(a.data.y_train(i) == doctest::Approx(x * x * x + x * x + x).epsilon(1e-14));
  }
}

TEST_CASE("evenly spaced rule is a shared grid with endpoints") {
  const BenchmarkSpec* spec = find_benchmark(registry(), "R-1*");
  REQUIRE(spec != nullptr);
  const InstantiatedBenchmark b = instantiate_benchmark(*spec, 5);
  CHECK(b.data.x_train.rows() == 20);
  CHECK(b.data.x_train(0, 0) == -10.0);
  CHECK(b.data.x_train(19, 0) == 10.0);
  const double step = 20.0 / 19.0;
  for (int i = 0; i < 20; ++i) {
    CHECK(b.data.x_train(i, 0) ==
          doctest::Approx(-10.0 + step * i).epsilon(1e-12));
  }
  CHECK(same(b.data.x_train, b.data.x_test));  // same rule, same grid
  CHECK(same(b.data.y_train, b.data.y_test));

  const InstantiatedBenchmark c = instantiate_benchmark(*spec, 6);
  CHECK(same(b.data.x_train, c.data.x_train));  // grids ignore the seed
}

TEST_CASE("large training sets and split-size overrides") {
  const InstantiatedBenchmark liv =
      instantiate_benchmark(*find_benchmark(registry(), "Livermore-1"), 3);
  CHECK(liv.data.x_train.rows() == 1000);
  CHECK(liv.data.domain[0].lo == -10.0);
  CHECK(liv.data.domain[0].hi == 10.0);

  const InstantiatedBenchmark jin =
      instantiate_benchmark(*find_benchmark(registry(), "Jin-1"), 3);
  CHECK(jin.data.x_train.rows() == 100);
  CHECK(jin.data.x_test.rows() == 30);
  CHECK(jin.data.n_variables() == 2);

  const InstantiatedBenchmark neat6 =
      instantiate_benchmark(*find_benchmark(registry(), "Neat-6"), 3);
  CHECK(neat6.data.x_train.rows() == 50);
  CHECK(neat6.data.x_test.rows() == 120);
  CHECK(neat6.data.x_train(0, 0) == 1.0);
  CHECK(neat6.data.x_train(49, 0) == 50.0);
  CHECK(neat6.data.x_test(119, 0) == 120.0);
  // harmonic numbers at integer grid points
  CHECK(neat6.data.y_train(0) == doctest::Approx(1.0));
  CHECK(neat6.data.y_train(3) ==
        doctest::Approx(1.0 + 0.5 + 1.0 / 3.0 + 0.25).epsilon(1e-12));
}

TEST_CASE("library composition per family") {
  const auto& specs = registry();
  for (const BenchmarkSpec& s : specs) {
    CAPTURE(s.name);
    const bool has = [&](const char* n) {
      return std::find(s.library.begin(), s.library.end(), n) !=
             s.library.end();
    }("const");
    // only the constants family searches over optimizable constants
    CHECK(has == (s.name.rfind("Jin-", 0) == 0));
  }

  const BenchmarkSpec* jin = find_benchmark(specs, "Jin-5");
  REQUIRE(jin != nullptr);
  auto in_lib = [&](const char* n) {
    return std::find(jin->library.begin(), jin->library.end(), n) !=
           jin->library.end();
  };
  CHECK(in_lib("square"));
  CHECK(in_lib("cube"));
  CHECK(in_lib("y"));
  CHECK(!in_lib("log"));

  const BenchmarkSpec* neat6 = find_benchmark(specs, "Neat-6");
  REQUIRE(neat6 != nullptr);
  CHECK(neat6->library ==
        std::vector<std::string>{"add", "mul", "div", "inv", "neg", "sqrt",
                                 "x"});

  const BenchmarkSpec* neat1 = find_benchmark(specs, "Neat-1");
  REQUIRE(neat1 != nullptr);
  CHECK(std::find(neat1->library.begin(), neat1->library.end(), "1") !=
        neat1->library.end());
}

TEST_CASE("two-variable benchmarks expose both variables") {
  for (const char* name : {"Nguyen-9", "Nguyen-12", "Livermore-11", "Jin-2",
                           "Neat-5", "Neat-9"}) {
    const BenchmarkSpec* s = find_benchmark(registry(), name);
    REQUIRE(s != nullptr);
    const InstantiatedBenchmark b = instantiate_benchmark(*s, 9);
    CHECK(b.lib.n_variables() == 2);
    // U-rule draws per variable are independent; E-rule grids coincide
    if (s->train.kind == 'U') {
      CHECK(!same(b.data.x_train.col(0), b.data.x_train.col(1)));
    } else {
      CHECK(same(b.data.x_train.col(0), b.data.x_train.col(1)));
    }
  }
}

TEST_CASE("selection by name, suite, and all") {
  const auto& specs = registry();
  CHECK(select_benchmarks(specs, "all").size() == 56);
  CHECK(select_benchmarks(specs, "nguyen").size() == 13);
  CHECK(select_benchmarks(specs, "livermore").size() == 22);
  CHECK(select_benchmarks(specs, "jin").size() == 6);
  CHECK(select_benchmarks(specs, "neat").size() == 9);
  CHECK(select_benchmarks(specs, "r").size() == 6);
  CHECK(select_benchmarks(specs, "main37").size() == 37);
  CHECK(select_benchmarks(specs, "standard41").size() == 41);

  const auto one = select_benchmarks(specs, "Nguyen-5");
  REQUIRE(one.size() == 1);
  CHECK(one[0].name == "Nguyen-5");
  CHECK(select_benchmarks(specs, "nguyen-5")[0].name == "Nguyen-5");
  CHECK_THROWS_AS(select_benchmarks(specs, "Nguyen-99"),
                  std::invalid_argument);

  for (const BenchmarkSpec& s : select_benchmarks(specs, "main37")) {
    CHECK(s.name.back() != '*');
  }
}

TEST_CASE("ground truth values spot-checked against closed forms") {
  auto value_at = [&](const char* name, double x, double y = 0.0) {
    const BenchmarkSpec* s = find_benchmark(registry(), name);
    REQUIRE(s != nullptr);
    TokenLibrary lib = TokenLibrary::from_names(s->library);
    const Traversal t = parse_infix(s->expression, lib, true);
    Eigen::MatrixXd pt(1, lib.n_variables());
    pt(0, 0) = x;
    if (lib.n_variables() > 1) pt(0, 1) = y;
    return evaluate(lib, t, pt).values(0);
  };

  CHECK(value_at("Nguyen-5", 0.7) ==
        doctest::Approx(std::sin(0.49) * std::cos(0.7) - 1.0).epsilon(1e-14));
  CHECK(value_at("Nguyen-11", 0.3, 0.8) ==
        doctest::Approx(std::pow(0.3, 0.8)).epsilon(1e-14));
  CHECK(value_at("Livermore-13", 2.0) ==
        doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
  CHECK(value_at("Livermore-16", 2.0) ==
        doctest::Approx(std::pow(2.0, 0.4)).epsilon(1e-12));
  CHECK(value_at("Livermore-22", 0.5) ==
        doctest::Approx(std::exp(-0.125)).epsilon(1e-14));
  CHECK(value_at("Jin-6", 1.5, -0.5) ==
        doctest::Approx(1.35 * 1.5 * -0.5 +
                        5.5 * std::sin(0.5 * -1.5)).epsilon(1e-12));
  CHECK(value_at("Neat-7", 2.0, 3.0) ==
        doctest::Approx(2.0 - 2.1 * std::cos(19.6) * std::sin(3.9))
            .epsilon(1e-12));
  CHECK(value_at("Neat-8", 1.0, 2.5) == doctest::Approx(1.0 / 1.2));
  CHECK(value_at("Neat-9", 1.0, 1.0) == doctest::Approx(1.0));
  // x = 0 makes x^-4 blow up; the summand collapses to zero in the limit
  CHECK(value_at("Neat-9", 0.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("loader rejects malformed specs") {
  CHECK_THROWS(load_benchmark_file("/nonexistent/nope.json"));
  CHECK_THROWS_AS(instantiate_benchmark(
                      BenchmarkSpec{"bad", "x + const",
                                    {"add", "x", "const"},
                                    DatasetRule{'U', 0, 1, 10},
                                    DatasetRule{'U', 0, 1, 10}},
                  1),
                  std::invalid_argument);
}
