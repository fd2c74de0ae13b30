#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cmath>

#include "epiloc/errors.hpp"

namespace epiloc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Default tolerance for projective equality of unit-normalized triples.
inline constexpr double kProjectiveTolerance = 1e-9;
/// |det3| of unit-normalized triples below this counts as collinear.
inline constexpr double kCollinearTolerance = 1e-8;

/// Unit Euclidean norm, first coordinate of significant magnitude positive.
Vec3 canonical(const Vec3& v);

/// Scale-free comparison: true iff a and b span the same 1-D subspace, i.e.
/// the unit representatives agree up to sign within `tol`.
bool projectively_equal(const Vec3& a, const Vec3& b, double tol = kProjectiveTolerance);

/// Pixel-frame representative: z = 1 when finite, canonical unit triple otherwise.
class HomPoint2;
HomPoint2 pixel_representative(const Vec3& v);

namespace detail {
struct PointTag {};
struct LineTag {};
}  // namespace detail

/// Homogeneous triple in the projective plane. Points and lines share the
/// representation; the tag keeps the two roles from being mixed up.
template <class Tag>
class Homogeneous {
 public:
  Homogeneous(double x, double y, double z) : Homogeneous(Vec3(x, y, z)) {}

  explicit Homogeneous(const Vec3& v) : v_(v) {
    if (!(v_.allFinite()) || v_.cwiseAbs().maxCoeff() == 0.0) {
      throw GeometryError(ErrorKind::degenerate_input, "homogeneous triple is zero or not finite");
    }
  }

  const Vec3& coords() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }

  friend bool operator==(const Homogeneous& a, const Homogeneous& b) {
    return projectively_equal(a.v_, b.v_);
  }

 private:
  Vec3 v_;
};

class HomPoint2 : public Homogeneous<detail::PointTag> {
 public:
  using Homogeneous::Homogeneous;

  static HomPoint2 from_pixel(double px, double py) { return HomPoint2(px, py, 1.0); }
  static HomPoint2 from_pixel(const Vec2& p) { return HomPoint2(p.x(), p.y(), 1.0); }

  HomPoint2 normalized() const { return HomPoint2(canonical(coords())); }

  /// True when the point is not at infinity (|z| relative to the norm).
  bool is_finite(double tol = 1e-12) const;

  /// Inhomogeneous pixel coordinates; throws for ideal points.
  Vec2 pixel() const;
};

class Line2 : public Homogeneous<detail::LineTag> {
 public:
  using Homogeneous::Homogeneous;

  Line2 normalized() const { return Line2(canonical(coords())); }

  /// Signed incidence l·p of unit-normalized triples.
  double incidence(const HomPoint2& p) const;

  /// Euclidean distance of a finite point to this line (pixels when both are
  /// in the pixel frame).
  double distance(const Vec2& p) const;
};

/// Invertible 3x3 projective map of the plane.
class Homography2 {
 public:
  explicit Homography2(const Mat3& m);

  static Homography2 identity() { return Homography2(Mat3::Identity()); }

  const Mat3& matrix() const noexcept { return m_; }
  Homography2 inverse() const { return Homography2(m_.inverse()); }

  HomPoint2 apply(const HomPoint2& p) const { return HomPoint2(m_ * p.coords()); }
  /// Lines transform contravariantly: l ↦ H⁻ᵀ l.
  Line2 apply(const Line2& l) const { return Line2(m_.inverse().transpose() * l.coords()); }

  friend Homography2 operator*(const Homography2& a, const Homography2& b) {
    return Homography2(a.m_ * b.m_);
  }

 private:
  Mat3 m_;
};

/// Determinant of the 2x2 formed by the first two coordinates of a and b.
inline double det2(const Vec3& a, const Vec3& b) { return a.x() * b.y() - a.y() * b.x(); }

template <class Tag>
double det2(const Homogeneous<Tag>& a, const Homogeneous<Tag>& b) {
  return det2(a.coords(), b.coords());
}

/// Signed 3x3 determinant with a, b, c as columns.
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

inline double det3(const HomPoint2& a, const HomPoint2& b, const HomPoint2& c) {
  return det3(a.coords(), b.coords(), c.coords());
}

/// det3 of the unit-normalized triples; scale-free collinearity measure.
double normalized_det3(const Vec3& a, const Vec3& b, const Vec3& c);

Line2 join(const HomPoint2& p, const HomPoint2& q);
HomPoint2 meet(const Line2& l, const Line2& m);

/// (|l1 l2||l3 l4|) / (|l1 l3||l2 l4|) with |ab| = det2. The pencil must be
/// concurrent and must not contain the line at infinity (0,0,1).
double cross_ratio_lines(const Line2& l1, const Line2& l2, const Line2& l3, const Line2& l4);

/// Quadratic Cremona map (x,y,z) ↦ (yz, zx, xy).
HomPoint2 reciprocal(const HomPoint2& p);

/// H with q1..q4 ↦ (1,0,0), (0,1,0), (0,0,1), (1,1,1).
Homography2 homography_to_standard_triangle(const HomPoint2& q1, const HomPoint2& q2,
                                            const HomPoint2& q3, const HomPoint2& q4);

}  // namespace epiloc
