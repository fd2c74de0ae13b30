#include "epiloc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "epiloc/random.hpp"
#include "epiloc/solvers.hpp"

namespace epiloc {

const char* to_string(BenchMethod m) {
  switch (m) {
    case BenchMethod::solve4: return "solve4";
    case BenchMethod::solve5: return "solve5";
    case BenchMethod::solve6: return "solve6";
  }
  return "unknown";
}

BenchMethod parse_bench_method(const std::string& name) {
  if (name == "solve4") return BenchMethod::solve4;
  if (name == "solve5") return BenchMethod::solve5;
  if (name == "solve6") return BenchMethod::solve6;
  throw std::invalid_argument("unknown bench method '" + name + "'");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

constexpr std::size_t kHeldOut = 6;

double pixel_distance(const HomPoint2& a, const HomPoint2& b) {
  if (!a.is_finite() || !b.is_finite()) return std::numeric_limits<double>::infinity();
  return (a.pixel() - b.pixel()).norm();
}

std::optional<double> trial_error(BenchMethod method, const Scene& scene, const NoiseSpec& noise) {
  const std::size_t used = method == BenchMethod::solve4 ? 4 : method == BenchMethod::solve5 ? 5 : 6;
  // The held-out point of solve6 is noised with the rest but only used to
  // draw the epipolar line.
  const CorrSet noisy = add_noise(scene.first(kHeldOut + 1), noise);
  std::vector<std::size_t> idx(used);
  for (std::size_t i = 0; i < used; ++i) idx[i] = i;
  const CorrSet corr = noisy.subset(idx);
  const HomPoint2 e = *noisy.epipole;

  switch (method) {
    case BenchMethod::solve4: {
      const Viewport img = scene.image2();
      const double mx = 0.5 * (img.x_max - img.x_min), my = 0.5 * (img.y_max - img.y_min);
      const Viewport view{img.x_min - mx, img.y_min - my, img.x_max + mx, img.y_max + my};
      const FourPointResult r = solve_four(e, corr, view, 2048);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& branch : r.branches)
        for (const auto& p : branch.points) best = std::min(best, pixel_distance(p, scene.e_prime_true));
      if (!std::isfinite(best)) return std::nullopt;
      return best;
    }
    case BenchMethod::solve5: {
      const double d = pixel_distance(solve_five(e, corr).e_prime, scene.e_prime_true);
      if (!std::isfinite(d)) return std::nullopt;
      return d;
    }
    case BenchMethod::solve6: {
      const Line2 line = join(e, noisy[kHeldOut].p);
      Vec2 centroid = Vec2::Zero();
      for (const auto& c : corr.pairs) centroid += c.p.pixel() / static_cast<double>(corr.size());
      const auto roots = solve_six(LineParam::from_line(line, centroid), corr);
      const double d = pixel_distance(roots.front().e_prime, scene.e_prime_true);
      if (!std::isfinite(d)) return std::nullopt;
      return d;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<BenchRow> bench_noise(const BenchConfig& config) {
  std::vector<std::optional<Scene>> scenes;
  scenes.reserve(config.trials);
  for (std::size_t k = 0; k < config.trials; ++k) {
    SceneConfig sc = config.mode == SceneMode::facing ? SceneConfig::facing(config.seed + k)
                                                      : SceneConfig::lateral(config.seed + k);
    try {
      scenes.emplace_back(generate_scene(sc));
    } catch (const GeometryError&) {
      scenes.emplace_back(std::nullopt);
    }
  }

  std::vector<BenchRow> rows;
  for (std::size_t si = 0; si < config.sigmas.size(); ++si) {
    BenchRow row;
    row.method = config.method;
    row.sigma = config.sigmas[si];
    std::size_t failures = 0;
    for (std::size_t k = 0; k < config.trials; ++k) {
      if (!scenes[k]) {
        ++failures;
        continue;
      }
      const NoiseSpec noise{row.sigma, derive_seed(config.seed, k), config.perturb_epipole};
      try {
        if (const auto err = trial_error(config.method, *scenes[k], noise)) {
          row.errors.push_back(*err);
          continue;
        }
      } catch (const GeometryError&) {
      }
      ++failures;
    }
    row.median_px = quantile(row.errors, 0.5);
    row.p90_px = quantile(row.errors, 0.9);
    row.fail_rate = config.trials ? static_cast<double>(failures) / static_cast<double>(config.trials) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "method,sigma,median_px,p90_px,fail_rate\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6g,%.9g,%.9g,%.6g\n", to_string(r.method), r.sigma, r.median_px, r.p90_px,
                  r.fail_rate);
    out << buf;
  }
}

}  // namespace epiloc
