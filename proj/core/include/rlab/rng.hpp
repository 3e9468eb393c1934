#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace rlab {

/// splitmix64 mixing step; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic seed derivation: one stream id per purpose, an index within it.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(stream + 1)) + index);
}

namespace seed_stream {
inline constexpr std::uint64_t kWeightInit = 1;
inline constexpr std::uint64_t kTrainGame = 2;
inline constexpr std::uint64_t kEvalGame = 3;
inline constexpr std::uint64_t kBeliefs = 4;
inline constexpr std::uint64_t kBoard = 5;
}  // namespace seed_stream

// mt19937_64 with explicit output mappings. The standard distributions are
// implementation-defined, so all scalar draws go through these helpers to keep
// byte-identical results for a given seed on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  int uniform_int(int n) {
    int v = static_cast<int>(uniform() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

  /// Standard exponential draw.
  double exponential() { return -std::log1p(-uniform()); }

  /// Symmetric Dirichlet(1) over `n` categories: normalized exponentials.
  Eigen::VectorXd dirichlet(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = exponential();
    double s = v.sum();
    if (s <= 0) return Eigen::VectorXd::Constant(n, 1.0 / n);
    return v / s;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rlab
