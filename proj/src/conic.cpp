#include "epiloc/conic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <numbers>
#include <numeric>

namespace epiloc {

const char* to_string(ConicClass c) {
  switch (c) {
    case ConicClass::nondegenerate: return "nondegenerate";
    case ConicClass::line_pair: return "line_pair";
    case ConicClass::double_line: return "double_line";
  }
  return "unknown";
}

Conic::Conic(const Coefficients& raw) {
  double largest = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v)) throw GeometryError(ErrorKind::degenerate_input, "conic has non-finite coefficients");
    largest = std::max(largest, std::abs(v));
  }
  if (!(largest > 0.0)) throw GeometryError(ErrorKind::degenerate_input, "conic has all-zero coefficients");
  scale_ = largest;
  for (double v : raw) {
    if (std::abs(v) > 1e-12 * largest) {
      if (v < 0.0) scale_ = -largest;
      break;
    }
  }
  for (std::size_t i = 0; i < raw.size(); ++i) k_[i] = raw[i] / scale_;
}

Conic Conic::from_matrix(const Mat3& m) {
  const Mat3 s = 0.5 * (m + m.transpose());
  return Conic(s(0, 0), 2.0 * s(0, 1), s(1, 1), 2.0 * s(0, 2), 2.0 * s(1, 2), s(2, 2));
}

Mat3 Conic::matrix() const {
  Mat3 m;
  m << a(), 0.5 * b(), 0.5 * d(),
       0.5 * b(), c(), 0.5 * e(),
       0.5 * d(), 0.5 * e(), f();
  return m;
}

double Conic::evaluate(const Vec3& p) const {
  const double x = p.x(), y = p.y(), z = p.z();
  return a() * x * x + b() * x * y + c() * y * y + d() * x * z + e() * y * z + f() * z * z;
}

Conic transform_conic(const Conic& conic, const Homography2& h) {
  const Mat3 inv = h.matrix().inverse();
  return Conic::from_matrix(inv.transpose() * conic.matrix() * inv);
}

ConicClass conic_classify(const Conic& conic) {
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Mat3>(conic.matrix()).singularValues();
  const double tol = 1e-8 * sv[0];
  const int rank = static_cast<int>((sv.array() > tol).count());
  if (rank >= 3) return ConicClass::nondegenerate;
  if (rank == 2) return ConicClass::line_pair;
  return ConicClass::double_line;
}

namespace {

struct Parametrization {
  Vec3 cos_axis;
  Vec3 sin_axis;
  Vec3 offset;

  Vec3 at(double theta) const { return cos_axis * std::cos(theta) + sin_axis * std::sin(theta) + offset; }
};

// With eigenvalues of signature (+,+,-), p(θ) = A cosθ + B sinθ + C traces
// the whole projective conic once as θ goes around the circle.
bool parametrize(const Conic& conic, Parametrization& out) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(conic.matrix());
  Eigen::Vector3d lambda = es.eigenvalues();
  Mat3 vecs = es.eigenvectors();
  int positive = static_cast<int>((lambda.array() > 0.0).count());
  if (positive == 0 || positive == 3) return false;
  if (positive == 1) lambda = -lambda;
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return lambda[i] > lambda[j]; });
  out.cos_axis = vecs.col(order[0]) / std::sqrt(lambda[order[0]]);
  out.sin_axis = vecs.col(order[1]) / std::sqrt(lambda[order[1]]);
  out.offset = vecs.col(order[2]) / std::sqrt(-lambda[order[2]]);
  return true;
}

bool in_view(const Vec3& p, const Viewport& vp) {
  if (std::abs(p.z()) <= 1e-12 * p.norm()) return false;
  return vp.contains(Vec2(p.x() / p.z(), p.y() / p.z()));
}

}  // namespace

std::vector<ConicPolyline> conic_sample(const Conic& conic, const Viewport& viewport, std::size_t n) {
  std::vector<ConicPolyline> out;
  if (n == 0 || !(viewport.x_max >= viewport.x_min) || !(viewport.y_max >= viewport.y_min)) return out;

  // Sample in a frame where the viewport is centred with unit half-extent so that
  // pixel-scale coefficients do not spoil the eigen-decomposition.
  const Vec2 centre(0.5 * (viewport.x_min + viewport.x_max), 0.5 * (viewport.y_min + viewport.y_max));
  const double half_x = 0.5 * (viewport.x_max - viewport.x_min);
  const double half_y = 0.5 * (viewport.y_max - viewport.y_min);
  const double half = std::max({half_x, half_y, 1e-300});
  Mat3 to_unit;
  to_unit << 1.0 / half, 0.0, -centre.x() / half,
             0.0, 1.0 / half, -centre.y() / half,
             0.0, 0.0, 1.0;
  const Homography2 h(to_unit);
  const Conic local = transform_conic(conic, h);
  if (conic_classify(local) != ConicClass::nondegenerate) {
    throw GeometryError(ErrorKind::degenerate_input, "cannot sample a degenerate conic");
  }
  const Viewport unit_view{-half_x / half, -half_y / half, half_x / half, half_y / half};
  const auto to_pixel = [&](const Vec3& p) {
    return HomPoint2(centre.x() + half * p.x() / p.z(), centre.y() + half * p.y() / p.z(), 1.0);
  };

  Parametrization param;
  if (!parametrize(local, param)) return out;

  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const std::size_t dense = std::max<std::size_t>(8192, 8 * n);
  const double step = kTwoPi / static_cast<double>(dense);
  std::vector<char> inside(dense);
  for (std::size_t i = 0; i < dense; ++i) inside[i] = in_view(param.at(step * static_cast<double>(i)), unit_view);

  const auto n_inside = static_cast<std::size_t>(std::count(inside.begin(), inside.end(), 1));
  if (n_inside == 0) return out;

  if (n_inside == dense) {
    ConicPolyline loop;
    loop.closed = true;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 p = param.at(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
      if (in_view(p, unit_view)) loop.points.push_back(to_pixel(p));
    }
    out.push_back(std::move(loop));
    return out;
  }

  // Runs of consecutive in-view samples, walking once around the circle from
  // an out-of-view sample so no run wraps.
  std::size_t start = 0;
  while (inside[start]) ++start;
  struct Run {
    std::size_t first;
    std::size_t last;
  };
  std::vector<Run> runs;
  for (std::size_t k = 1; k <= dense; ++k) {
    const std::size_t i = start + k;
    if (!inside[i % dense]) continue;
    if (!runs.empty() && runs.back().last + 1 == i) {
      runs.back().last = i;
    } else {
      runs.push_back({i, i});
    }
  }

  // Share the n points across runs proportionally to their angular extent.
  std::vector<double> weight(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) weight[r] = static_cast<double>(runs[r].last - runs[r].first + 1);
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<std::size_t> count(runs.size());
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t used = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double share = static_cast<double>(n) * weight[r] / total;
    count[r] = static_cast<std::size_t>(std::floor(share));
    used += count[r];
    remainder.emplace_back(share - std::floor(share), r);
  }
  std::stable_sort(remainder.begin(), remainder.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; used < n && i < remainder.size(); ++i, ++used) ++count[remainder[i].second];

  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (count[r] == 0) continue;
    const double t0 = step * static_cast<double>(runs[r].first);
    const double t1 = step * static_cast<double>(runs[r].last);
    ConicPolyline line;
    for (std::size_t j = 0; j < count[r]; ++j) {
      const double theta = count[r] == 1 ? 0.5 * (t0 + t1)
                                         : t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(count[r] - 1);
      const Vec3 p = param.at(theta);
      if (in_view(p, unit_view)) line.points.push_back(to_pixel(p));
    }
    if (!line.points.empty()) out.push_back(std::move(line));
  }
  return out;
}

}  // namespace epiloc
