#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "epiloc/scene.hpp"

namespace epiloc {

enum class BenchMethod { solve4, solve5, solve6 };

const char* to_string(BenchMethod m);
/// Throws std::invalid_argument for an unknown name.
BenchMethod parse_bench_method(const std::string& name);

struct BenchConfig {
  BenchMethod method = BenchMethod::solve5;
  std::vector<double> sigmas{0.0, 0.5, 1.0, 2.0};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  SceneMode mode = SceneMode::facing;
  bool perturb_epipole = false;
};

/// Per-sigma summary. Errors are pixel distances to the true e' (solve5,
/// solve6) or from the true e' to the nearest sampled conic point (solve4).
/// Quantiles are over the successful trials and NaN when none succeeded.
struct BenchRow {
  BenchMethod method = BenchMethod::solve5;
  double sigma = 0.0;
  double median_px = 0.0;
  double p90_px = 0.0;
  double fail_rate = 0.0;
  std::vector<double> errors;  // successful trials, in trial order
};

/// Trial k uses the scene seeded seed + k and the same unit noise draw for
/// every sigma, so rows differ only by the noise amplitude.
std::vector<BenchRow> bench_noise(const BenchConfig& config);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Linear-interpolated quantile, q in [0, 1]. NaN for an empty sample.
double quantile(std::vector<double> values, double q);

}  // namespace epiloc
