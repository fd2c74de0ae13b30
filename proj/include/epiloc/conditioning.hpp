#pragma once

#include <span>

#include "epiloc/conic.hpp"
#include "epiloc/projective.hpp"

namespace epiloc {

/// Isotropic normalizing similarity: centroid to the origin, RMS distance √2.
/// Points at infinity are ignored when fitting. Falls back to a pure
/// translation (or identity) when the finite points are coincident (or absent).
class Conditioner {
 public:
  Conditioner() = default;

  static Conditioner fit(std::span<const HomPoint2> points);

  const Mat3& matrix() const noexcept { return t_; }
  const Mat3& inverse() const noexcept { return t_inv_; }

  Vec3 point_to_normalized(const Vec3& p) const { return t_ * p; }
  Vec3 point_to_pixel(const Vec3& p) const { return t_inv_ * p; }
  Vec3 line_to_normalized(const Vec3& l) const { return t_inv_.transpose() * l; }
  Vec3 line_to_pixel(const Vec3& l) const { return t_.transpose() * l; }

  HomPoint2 to_normalized(const HomPoint2& p) const { return HomPoint2(point_to_normalized(p.coords())); }
  HomPoint2 to_pixel(const HomPoint2& p) const { return HomPoint2(point_to_pixel(p.coords())); }

  /// Conic given in the normalized frame, re-expressed in the pixel frame.
  Conic conic_to_pixel(const Conic& normalized) const {
    return Conic::from_matrix(t_.transpose() * normalized.matrix() * t_);
  }

 private:
  Mat3 t_ = Mat3::Identity();
  Mat3 t_inv_ = Mat3::Identity();
};

}  // namespace epiloc
