#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace epiloc {

/// Seedable generator with a fully specified algorithm so that scenes and
/// bench CSVs reproduce across platforms: std::mt19937_64 (fixed by the
/// standard), uniforms from the top 53 bits, Gaussians by the Box–Muller
/// transform using both outputs. std::*_distribution is avoided because its
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Stream seed for (base, a, b) so independent trials do not share draws.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace epiloc
