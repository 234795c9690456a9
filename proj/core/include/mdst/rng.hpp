#pragma once

#include <cstdint>
#include <random>

namespace mdst {

/// Seeded generator with portable bounded draws (the standard distributions
/// are implementation-defined, which would break cross-toolchain traces).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(mix(seed)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  double uniform01();
  bool coin(double p_true = 0.5) { return uniform01() < p_true; }

  /// Derives an independent stream, e.g. per node or per fault.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  static std::uint64_t mix(std::uint64_t x);
  std::mt19937_64 engine_;
};

}  // namespace mdst
