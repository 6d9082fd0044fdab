#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace tubempc {

/// Deterministic pseudo-random stream. All stochastic code in the library
/// draws through this class so that a (seed, call-order) pair fully
/// determines every sampled value, independent of standard-library
/// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Integer uniform in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);

  /// Standard normal via Box-Muller (pairs are cached).
  double normal();
  double normal(double mean, double stddev);
  Eigen::VectorXd normal_vector(int n, double stddev = 1.0);

  /// Derive an independent child seed for a numbered stream. Used to give
  /// parallel rollouts / episodes stable per-index streams.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace tubempc
