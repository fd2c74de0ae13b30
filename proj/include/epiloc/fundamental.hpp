#pragma once

#include <utility>

#include "epiloc/crossratio.hpp"
#include "epiloc/projective.hpp"

namespace epiloc {

/// Rank-2 fundamental matrix, p'ᵀ F p = 0, with its epipoles F e = 0 and
/// Fᵀ e' = 0. Stored in canonical scale: Frobenius norm 1, largest-magnitude
/// entry positive.
class FundMatrix {
 public:
  /// Validates rank 2 (σ3/σ1 < 1e-8) and caches both null directions.
  static FundMatrix from_matrix(const Mat3& m);

  const Mat3& matrix() const noexcept { return m_; }
  const HomPoint2& e() const noexcept { return e_; }
  const HomPoint2& e_prime() const noexcept { return e_prime_; }

  /// Same geometry with the two images exchanged (Fᵀ).
  FundMatrix transposed() const;

 private:
  FundMatrix(const Mat3& m, const HomPoint2& e, const HomPoint2& e_prime) : m_(m), e_(e), e_prime_(e_prime) {}

  Mat3 m_;
  HomPoint2 e_;
  HomPoint2 e_prime_;
};

/// Frobenius norm 1 and the largest-magnitude entry positive.
Mat3 canonical_f(const Mat3& m);

/// F from both epipoles and at least three correspondences. The epipole
/// equations F e = 0 and Fᵀ e' = 0 are imposed exactly and the
/// correspondence equations p'ᵀ F p = 0 are solved in least squares within
/// that subspace, all in conditioned coordinates.
FundMatrix f_from_epipoles_and_corr(const HomPoint2& e, const HomPoint2& e_prime, const CorrSet& corr);

/// Right and left null directions (pixel representatives).
std::pair<HomPoint2, HomPoint2> epipoles_from_f(const Mat3& f);
inline std::pair<HomPoint2, HomPoint2> epipoles_from_f(const FundMatrix& f) { return {f.e(), f.e_prime()}; }

/// Epipolar line F p in image 2.
Line2 epipolar_transfer(const FundMatrix& f, const HomPoint2& p);

/// Mean of the two point-to-epipolar-line distances, in pixels.
double sym_epipolar_distance(const FundMatrix& f, const Correspondence& c);

}  // namespace epiloc
