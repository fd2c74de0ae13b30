#include "epiloc/fundamental.hpp"

#include <Eigen/SVD>
#include <string>

namespace epiloc {

Mat3 canonical_f(const Mat3& m) {
  const double n = m.norm();
  if (!(n > 0.0)) throw GeometryError(ErrorKind::degenerate_input, "zero fundamental matrix");
  Mat3 out = m / n;
  Eigen::Index r = 0, c = 0;
  out.cwiseAbs().maxCoeff(&r, &c);
  if (out(r, c) < 0.0) out = -out;
  return out;
}

FundMatrix FundMatrix::from_matrix(const Mat3& m) {
  const Mat3 f = canonical_f(m);
  Eigen::JacobiSVD<Mat3> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (!(sv[1] > 1e-8 * sv[0])) throw GeometryError(ErrorKind::degenerate_input, "fundamental matrix has rank < 2");
  if (!(sv[2] < 1e-8 * sv[0])) throw GeometryError(ErrorKind::degenerate_input, "fundamental matrix is not rank 2");
  return FundMatrix(f, pixel_representative(svd.matrixV().col(2)), pixel_representative(svd.matrixU().col(2)));
}

FundMatrix FundMatrix::transposed() const { return FundMatrix(canonical_f(m_.transpose()), e_prime_, e_); }

std::pair<HomPoint2, HomPoint2> epipoles_from_f(const Mat3& f) {
  Eigen::JacobiSVD<Mat3> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (!(sv[1] > 1e-8 * sv[0])) throw GeometryError(ErrorKind::degenerate_input, "fundamental matrix has rank < 2");
  return {pixel_representative(svd.matrixV().col(2)), pixel_representative(svd.matrixU().col(2))};
}

FundMatrix f_from_epipoles_and_corr(const HomPoint2& e, const HomPoint2& e_prime, const CorrSet& corr) {
  if (corr.size() < 3) throw GeometryError(ErrorKind::underdetermined, "need at least 3 correspondences");
  const ConditionedCorr cc(corr);
  const Vec3 en = cc.image1().point_to_normalized(e.coords()).normalized();
  const Vec3 epn = cc.image2().point_to_normalized(e_prime.coords()).normalized();

  // Entries of F row-major: f[3r + c] = F(r, c).
  Eigen::Matrix<double, 6, 9> epipolar = Eigen::Matrix<double, 6, 9>::Zero();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      epipolar(r, 3 * r + c) = en[c];
      epipolar(3 + c, 3 * r + c) = epn[r];
    }
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 9>> esvd(epipolar, Eigen::ComputeFullV);
  const auto& esv = esvd.singularValues();
  const auto epipole_rank = static_cast<int>((esv.array() > 1e-10 * esv[0]).count());
  if (epipole_rank != 5) {
    throw GeometryError(ErrorKind::underdetermined, "epipole equations have rank " + std::to_string(epipole_rank));
  }
  const Eigen::Matrix<double, 9, 4> basis = esvd.matrixV().rightCols<4>();

  Eigen::MatrixXd design(static_cast<Eigen::Index>(corr.size()), 9);
  for (std::size_t s = 0; s < corr.size(); ++s) {
    const Vec3& p = cc.p(s);
    const Vec3& pp = cc.p_prime(s);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) design(static_cast<Eigen::Index>(s), 3 * r + c) = pp[r] * p[c];
  }
  const Eigen::MatrixXd reduced = design * basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(reduced, Eigen::ComputeFullV);
  const Eigen::VectorXd rsv = rsvd.singularValues();
  const auto reduced_rank = static_cast<int>((rsv.array() > 1e-10 * rsv[0]).count());
  if (reduced_rank < 3) {
    throw GeometryError(ErrorKind::underdetermined,
                        "linear system has rank " + std::to_string(epipole_rank + reduced_rank) + " < 8");
  }
  const Eigen::Matrix<double, 9, 1> f = basis * rsvd.matrixV().col(3);
  Mat3 fn;
  fn << f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8];
  return FundMatrix::from_matrix(cc.image2().matrix().transpose() * fn * cc.image1().matrix());
}

Line2 epipolar_transfer(const FundMatrix& f, const HomPoint2& p) {
  const Vec3 l = f.matrix() * p.coords().normalized();
  if (l.norm() <= 1e-12) throw GeometryError(ErrorKind::degenerate_input, "point coincides with the epipole");
  return Line2(f.matrix() * p.coords());
}

double sym_epipolar_distance(const FundMatrix& f, const Correspondence& c) {
  const double in_second = epipolar_transfer(f, c.p).distance(c.p_prime.pixel());
  const double in_first = epipolar_transfer(f.transposed(), c.p_prime).distance(c.p.pixel());
  return 0.5 * (in_first + in_second);
}

}  // namespace epiloc
