#pragma once

#include <cstdint>
#include <random>

namespace symreg {

// mt19937_64 engine with hand-rolled distribution transforms.  The standard
// engine output is pinned by the C++ standard; the transforms live here so
// that results never depend on the libstdc++ version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // splitmix64-style combiner for deriving independent substreams.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n), n > 0
  int uniform_int(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                             static_cast<unsigned __int128>(n)) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    // Box-Muller; the second value is discarded to keep the state simple.
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // weights need not be normalized; total must be > 0
  int categorical(const double* w, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i];
    double u = uniform() * total;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += w[i];
      if (u < acc) return i;
    }
    for (int i = n - 1; i >= 0; --i) {
      if (w[i] > 0.0) return i;
    }
    return n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace symreg
