#include "pencil_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <complex>

namespace oracle {

namespace {

Mat3 cross_matrix(const Vec3& v) {
  Mat3 s;
  s << 0.0, v.z(), -v.y(), -v.z(), 0.0, v.x(), v.y(), -v.x(), 0.0;
  return s;
}

Mat3 adjugate(const Mat3& m) {
  Mat3 a;
  a.row(0) = m.row(1).cross(m.row(2));
  a.row(1) = m.row(2).cross(m.row(0));
  a.row(2) = m.row(0).cross(m.row(1));
  return a.transpose();
}

// det(A + λB) = k3 λ³ + k2 λ² + k1 λ + k0, coefficients read off by sampling.
std::vector<double> real_cubic_roots(const Mat3& a, const Mat3& b) {
  const auto d = [&](double t) { return (a + t * b).determinant(); };
  const double p0 = d(0.0), p1 = d(1.0), pm = d(-1.0), p2 = d(2.0);
  const double k0 = p0;
  const double k2 = 0.5 * (p1 + pm) - p0;
  const double odd = 0.5 * (p1 - pm);  // k1 + k3
  const double k3 = (p2 - p0 - 4.0 * k2 - 2.0 * odd) / 6.0;
  const double k1 = odd - k3;
  std::vector<double> roots;
  if (std::abs(k3) < 1e-14 * (std::abs(k0) + std::abs(k1) + std::abs(k2))) return roots;
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(0, 0) = -k2 / k3;
  companion(0, 1) = -k1 / k3;
  companion(0, 2) = -k0 / k3;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  const Eigen::Vector3cd ev = companion.eigenvalues();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(ev[i].imag()) < 1e-9 * (1.0 + std::abs(ev[i]))) {
      // polish with Newton on the determinant
      double t = ev[i].real();
      for (int it = 0; it < 8; ++it) {
        const double f = ((k3 * t + k2) * t + k1) * t + k0;
        const double df = (3.0 * k3 * t + 2.0 * k2) * t + k1;
        if (df == 0.0) break;
        t -= f / df;
      }
      roots.push_back(t);
    }
  }
  return roots;
}

// Lines of a rank-2 symmetric matrix, or nothing if they are not real.
bool split_line_pair(const Mat3& d, Vec3& g, Vec3& h) {
  const Mat3 b = adjugate(d);
  Eigen::Index i = 0;
  b.diagonal().cwiseAbs().maxCoeff(&i);
  if (b(i, i) > 1e-12 * b.cwiseAbs().maxCoeff()) return false;  // complex pair
  const Vec3 p = b.col(i) / std::sqrt(std::max(-b(i, i), 0.0));
  const Mat3 m = d + cross_matrix(p);
  Eigen::Index r = 0, c = 0;
  m.cwiseAbs().maxCoeff(&r, &c);
  g = m.row(r).transpose();
  h = m.col(c);
  return true;
}

}  // namespace

std::vector<Vec3> line_conic_intersections(const Vec3& l, const Mat3& c) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 1, 3>> svd(l.transpose(), Eigen::ComputeFullV);
  const Vec3 a = svd.matrixV().col(1);
  const Vec3 b = svd.matrixV().col(2);
  const double qa = a.dot(c * a), qb = 2.0 * a.dot(c * b), qc = b.dot(c * b);
  const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
  std::vector<Vec3> out;
  if (scale == 0.0) return out;
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < -1e-12 * scale * scale) return out;
  disc = std::sqrt(std::max(disc, 0.0));
  // roots (s : t) of qa s² + qb s t + qc t² = 0 in the division-free stable form
  const double q = -0.5 * (qb + std::copysign(disc, qb));
  for (const Vec3& v : {Vec3(q * a + qa * b), Vec3(qc * a + q * b)}) {
    if (v.norm() > 1e-14 * scale) out.push_back(v.normalized());
  }
  return out;
}

std::vector<Vec3> conic_intersections(const Mat3& c1, const Mat3& c2) {
  const Mat3 a = c1 / c1.norm();
  const Mat3 b = c2 / c2.norm();
  std::vector<Vec3> best;
  for (const double lambda : real_cubic_roots(a, b)) {
    Vec3 g, h;
    if (!split_line_pair(a + lambda * b, g, h)) continue;
    std::vector<Vec3> pts = line_conic_intersections(g, a);
    for (const auto& p : line_conic_intersections(h, a)) pts.push_back(p);
    if (pts.size() > best.size()) best = pts;
    if (best.size() == 4) break;
  }
  return best;
}

}  // namespace oracle
