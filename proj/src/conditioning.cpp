#include "epiloc/conditioning.hpp"

#include <numbers>

namespace epiloc {

Conditioner Conditioner::fit(std::span<const HomPoint2> points) {
  Vec2 centroid = Vec2::Zero();
  std::size_t count = 0;
  for (const auto& p : points) {
    if (!p.is_finite()) continue;
    centroid += p.pixel();
    ++count;
  }
  Conditioner out;
  if (count == 0) return out;
  centroid /= static_cast<double>(count);

  double sq = 0.0;
  for (const auto& p : points) {
    if (p.is_finite()) sq += (p.pixel() - centroid).squaredNorm();
  }
  const double rms = std::sqrt(sq / static_cast<double>(count));
  const double s = rms > 0.0 ? std::numbers::sqrt2 / rms : 1.0;

  out.t_ << s, 0.0, -s * centroid.x(),
            0.0, s, -s * centroid.y(),
            0.0, 0.0, 1.0;
  out.t_inv_ << 1.0 / s, 0.0, centroid.x(),
                0.0, 1.0 / s, centroid.y(),
                0.0, 0.0, 1.0;
  return out;
}

}  // namespace epiloc
