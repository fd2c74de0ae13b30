#include "epiloc/projective.hpp"

#include <Eigen/LU>
#include <string>

namespace epiloc {

Vec3 canonical(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw GeometryError(ErrorKind::degenerate_input, "cannot normalize a zero triple");
  Vec3 u = v / n;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(u[i]) > 1e-12) {
      if (u[i] < 0.0) u = -u;
      break;
    }
  }
  return u;
}

bool projectively_equal(const Vec3& a, const Vec3& b, double tol) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) return false;
  const Vec3 ua = a / na;
  const Vec3 ub = b / nb;
  return std::min((ua - ub).norm(), (ua + ub).norm()) <= tol;
}

HomPoint2 pixel_representative(const Vec3& v) {
  const HomPoint2 p(v);
  if (p.is_finite()) return HomPoint2(v.x() / v.z(), v.y() / v.z(), 1.0);
  return HomPoint2(canonical(v));
}

bool HomPoint2::is_finite(double tol) const {
  return std::abs(z()) > tol * coords().norm();
}

Vec2 HomPoint2::pixel() const {
  if (!is_finite()) throw GeometryError(ErrorKind::degenerate_input, "point at infinity has no pixel coordinates");
  return Vec2(x() / z(), y() / z());
}

double Line2::incidence(const HomPoint2& p) const {
  return coords().normalized().dot(p.coords().normalized());
}

double Line2::distance(const Vec2& p) const {
  const double g = coords().head<2>().norm();
  if (!(g > 0.0)) throw GeometryError(ErrorKind::degenerate_input, "line at infinity has no Euclidean distance");
  return std::abs(coords().x() * p.x() + coords().y() * p.y() + coords().z()) / g;
}

Homography2::Homography2(const Mat3& m) : m_(m) {
  if (!m_.allFinite()) throw GeometryError(ErrorKind::ill_conditioned, "homography has non-finite entries");
  Mat3 scaled = m_;
  for (int r = 0; r < 3; ++r) {
    const double n = scaled.row(r).norm();
    if (!(n > 0.0)) throw GeometryError(ErrorKind::ill_conditioned, "homography has a zero row");
    scaled.row(r) /= n;
  }
  if (std::abs(scaled.determinant()) <= 1e-12) {
    throw GeometryError(ErrorKind::ill_conditioned, "homography is singular");
  }
}

double normalized_det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return det3(a.normalized(), b.normalized(), c.normalized());
}

Line2 join(const HomPoint2& p, const HomPoint2& q) {
  const Vec3 l = p.coords().normalized().cross(q.coords().normalized());
  if (l.norm() <= 1e-12) throw GeometryError(ErrorKind::degenerate_input, "join of coincident points");
  return Line2(p.coords().cross(q.coords()));
}

HomPoint2 meet(const Line2& l, const Line2& m) {
  const Vec3 p = l.coords().normalized().cross(m.coords().normalized());
  if (p.norm() <= 1e-12) throw GeometryError(ErrorKind::degenerate_input, "meet of coincident lines");
  return HomPoint2(l.coords().cross(m.coords()));
}

double cross_ratio_lines(const Line2& l1, const Line2& l2, const Line2& l3, const Line2& l4) {
  const Vec3 a = l1.coords().normalized();
  const Vec3 b = l2.coords().normalized();
  const Vec3 c = l3.coords().normalized();
  const Vec3 d = l4.coords().normalized();
  const double d13 = det2(a, c);
  const double d24 = det2(b, d);
  if (std::abs(d13) <= 1e-12 || std::abs(d24) <= 1e-12) {
    throw GeometryError(ErrorKind::degenerate_pencil, "coincident lines in pencil");
  }
  return det2(a, b) * det2(c, d) / (d13 * d24);
}

HomPoint2 reciprocal(const HomPoint2& p) {
  const Vec3& v = p.coords();
  const double scale = v.cwiseAbs().maxCoeff();
  int zeros = 0;
  for (int i = 0; i < 3; ++i) zeros += std::abs(v[i]) <= 1e-12 * scale ? 1 : 0;
  if (zeros >= 2) {
    throw GeometryError(ErrorKind::degenerate_input, "reciprocal of a triangle vertex is undefined");
  }
  return HomPoint2(v.y() * v.z(), v.z() * v.x(), v.x() * v.y());
}

Homography2 homography_to_standard_triangle(const HomPoint2& q1, const HomPoint2& q2,
                                            const HomPoint2& q3, const HomPoint2& q4) {
  const std::array<Vec3, 4> q{q1.coords(), q2.coords(), q3.coords(), q4.coords()};
  constexpr std::array<std::array<int, 3>, 4> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& [i, j, k] = triples[t];
    if (std::abs(normalized_det3(q[i], q[j], q[k])) < kCollinearTolerance) {
      throw GeometryError(ErrorKind::ill_conditioned,
                          "points " + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                              std::to_string(k + 1) + " are collinear (triple " + std::to_string(t) + ")");
    }
  }
  Mat3 basis;
  basis << q[0], q[1], q[2];
  const Vec3 lambda = basis.partialPivLu().solve(q[3]);
  const Mat3 back = basis * lambda.asDiagonal();
  return Homography2(back.inverse());
}

}  // namespace epiloc
