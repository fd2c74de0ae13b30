#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "epiloc/conditioning.hpp"
#include "epiloc/conic.hpp"
#include "epiloc/projective.hpp"

namespace epiloc {

/// A point in image 1 and its match in image 2, both in pixels.
struct Correspondence {
  HomPoint2 p;
  HomPoint2 p_prime;
};

/// Ordered correspondences with the optional known geometry of image 1.
struct CorrSet {
  std::vector<Correspondence> pairs;
  std::optional<HomPoint2> epipole;
  std::optional<Line2> epiline;

  std::size_t size() const noexcept { return pairs.size(); }
  const Correspondence& operator[](std::size_t i) const { return pairs[i]; }

  std::vector<HomPoint2> image1() const;
  std::vector<HomPoint2> image2() const;

  /// Same pairs with the roles of the two images exchanged. Known epipole
  /// and epipolar line are dropped since they belong to image 1.
  CorrSet swapped() const;

  /// Subset in the order given.
  CorrSet subset(std::span<const std::size_t> indices) const;
};

/// Four pairwise distinct indices into a CorrSet, in the order used by the
/// constraint: pairings {ij, kl} on one side against {ik, jl} on the other.
class QuadIndex {
 public:
  QuadIndex(std::size_t i, std::size_t j, std::size_t k, std::size_t l);

  std::size_t i() const noexcept { return idx_[0]; }
  std::size_t j() const noexcept { return idx_[1]; }
  std::size_t k() const noexcept { return idx_[2]; }
  std::size_t l() const noexcept { return idx_[3]; }
  const std::array<std::size_t, 4>& indices() const noexcept { return idx_; }

  QuadIndex sorted() const;
  bool contains(std::size_t index) const;

  friend bool operator==(const QuadIndex&, const QuadIndex&) = default;

 private:
  std::array<std::size_t, 4> idx_;
};

/// All C(n,4) ascending quads in lexicographic order.
std::vector<QuadIndex> all_quads(std::size_t n);

/// The three orderings of the same four indices that compare different
/// pairings: (i,j,k,l), (i,j,l,k), (i,k,l,j).
std::array<QuadIndex, 3> inequivalent_orderings(const QuadIndex& q);

/// Correspondences mapped through per-image normalizing similarities, the
/// frame in which every residual and tolerance is stated.
class ConditionedCorr {
 public:
  explicit ConditionedCorr(const CorrSet& corr);

  std::size_t size() const noexcept { return p_.size(); }
  const Vec3& p(std::size_t s) const { return p_[s]; }
  const Vec3& p_prime(std::size_t s) const { return pp_[s]; }

  const Conditioner& image1() const noexcept { return t1_; }
  const Conditioner& image2() const noexcept { return t2_; }

 private:
  Conditioner t1_;
  Conditioner t2_;
  std::vector<Vec3> p_;
  std::vector<Vec3> pp_;
};

/// |e pi pj||e pk pl||e' p'i p'k||e' p'j p'l| − |e' p'i p'j||e' p'k p'l||e pi pk||e pj pl|
/// on already-conditioned coordinates, taken at the scale given. No checks.
double quad_residual(const Vec3& e, const Vec3& e_prime, const QuadIndex& q, const ConditionedCorr& cc);

/// Throws redundant_configuration when e is collinear (normalized |det3| <
/// 1e-8) with two image-1 points of the quad.
void check_quad(const Vec3& e, const QuadIndex& q, const ConditionedCorr& cc);

/// The cross-ratio constraint for pixel-frame epipoles, evaluated on the
/// conditioned transport of e and e' (their homogeneous scale is kept, so a
/// pixel epipole (x, y, 1) keeps z = 1).
double constraint_residual(const HomPoint2& e, const HomPoint2& e_prime, const QuadIndex& q, const CorrSet& corr);

/// Conic in the normalized image-2 frame: zᵀ C z equals quad_residual(e, z)
/// up to the canonical scale. `e` is already conditioned.
Conic conic_from_4corr_normalized(const Vec3& e, const QuadIndex& q, const ConditionedCorr& cc);

/// Locus of e' in pixels for a known pixel epipole e and four correspondences.
Conic conic_from_4corr(const HomPoint2& e, const QuadIndex& q, const CorrSet& corr);

/// RMS of quad_residual over all ascending quads with unit-normalized
/// conditioned e and e'. Scale-free.
double residual_rms(const Vec3& e, const Vec3& e_prime, const ConditionedCorr& cc);
double residual_rms(const HomPoint2& e, const HomPoint2& e_prime, const CorrSet& corr);

/// Same quantity on raw pixel coordinates (points with z = 1, finite epipoles
/// with z = 1), reported for display only.
double residual_rms_pixel(const HomPoint2& e, const HomPoint2& e_prime, const CorrSet& corr);

}  // namespace epiloc
