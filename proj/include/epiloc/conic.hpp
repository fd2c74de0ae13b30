#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "epiloc/projective.hpp"

namespace epiloc {

enum class ConicClass { nondegenerate, line_pair, double_line };

const char* to_string(ConicClass c);

/// a x² + b xy + c y² + d xz + e yz + f z² = 0, stored in canonical scale:
/// max |coefficient| = 1 and the first nonzero coefficient positive.
class Conic {
 public:
  using Coefficients = std::array<double, 6>;

  explicit Conic(const Coefficients& raw);
  Conic(double a, double b, double c, double d, double e, double f) : Conic(Coefficients{a, b, c, d, e, f}) {}

  /// Uses the symmetric part of `m`.
  static Conic from_matrix(const Mat3& m);

  const Coefficients& coefficients() const noexcept { return k_; }
  double a() const noexcept { return k_[0]; }
  double b() const noexcept { return k_[1]; }
  double c() const noexcept { return k_[2]; }
  double d() const noexcept { return k_[3]; }
  double e() const noexcept { return k_[4]; }
  double f() const noexcept { return k_[5]; }

  /// Factor divided out during canonicalization: raw = scale() * canonical.
  double scale() const noexcept { return scale_; }

  /// Symmetric matrix [[a, b/2, d/2], [b/2, c, e/2], [d/2, e/2, f]].
  Mat3 matrix() const;

  /// pᵀ C p with p taken as given.
  double evaluate(const Vec3& p) const;
  /// pᵀ C p with p unit-normalized.
  double incidence(const HomPoint2& p) const { return evaluate(p.coords().normalized()); }

 private:
  Coefficients k_{};
  double scale_ = 1.0;
};

/// C ↦ H⁻ᵀ C H⁻¹, so that p ∈ C iff H p ∈ transform_conic(C, H).
Conic transform_conic(const Conic& conic, const Homography2& h);

/// Rank of the coefficient matrix at relative tolerance 1e-8.
ConicClass conic_classify(const Conic& conic);

struct Viewport {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool contains(const Vec2& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
};

/// One connected piece of a conic branch inside a viewport.
struct ConicPolyline {
  std::vector<HomPoint2> points;
  bool closed = false;
};

/// At most n points on a nondegenerate conic inside the viewport, grouped into
/// connected polylines. A conic with no real points in view yields nothing.
std::vector<ConicPolyline> conic_sample(const Conic& conic, const Viewport& viewport, std::size_t n);

}  // namespace epiloc
