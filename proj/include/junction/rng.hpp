#pragma once

#include <cstdint>
#include <random>

namespace junction {

// Deterministic random source. All stochastic code in the project draws
// through this wrapper so that a fixed seed reproduces runs bit-for-bit.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(uint64_t seed) : seed_(seed), gen_(splitmix(seed)) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Modulo bias is negligible for the small n used here.
  int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<uint64_t>(n)); }

  bool bernoulli(double p) { return uniform() < p; }

  uint64_t seed() const { return seed_; }

  // Derives an independent stream; distinct tags give distinct streams.
  Rng child(uint64_t tag) const {
    return Rng(splitmix(seed_ ^ (0x9e3779b97f4a7c15ULL * (tag + 1))));
  }

 private:
  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace junction
