#include <gtest/gtest.h>

#include <Eigen/LU>

#include "../test_support.hpp"
#include "epiloc/fundamental.hpp"
#include "epiloc/random.hpp"
#include "epiloc/solvers.hpp"

using namespace epiloc;
using testing_support::s1;

namespace {

double canonical_distance(const Mat3& a, const Mat3& b) { return (canonical_f(a) - canonical_f(b)).norm(); }

}  // namespace

TEST(FFromEpipoles, ReferenceSceneWithThreeCorrespondences) {
  const Scene& s = s1();
  const FundMatrix f = f_from_epipoles_and_corr(s.e_true, s.e_prime_true, s.first(3));
  EXPECT_LT(canonical_distance(f.matrix(), s.F_true.matrix()), 1e-8);
}

TEST(FFromEpipoles, HeldOutCorrespondencesSatisfyTheConstraint) {
  const Scene& s = s1();
  const FundMatrix f = f_from_epipoles_and_corr(s.e_true, s.e_prime_true, s.first(4));
  const ConditionedCorr cc(s.corr);
  const Mat3 fn = cc.image2().inverse().transpose() * f.matrix() * cc.image1().inverse();
  const Mat3 fc = fn / fn.norm();
  for (std::size_t i = 4; i < s.corr.size(); ++i) {
    EXPECT_LT(std::abs(cc.p_prime(i).normalized().dot(fc * cc.p(i).normalized())), 1e-9);
  }
}

TEST(FFromEpipoles, SwappingSidesTransposes) {
  const Scene& s = s1();
  const FundMatrix f = f_from_epipoles_and_corr(s.e_true, s.e_prime_true, s.first(5));
  const FundMatrix g = f_from_epipoles_and_corr(s.e_prime_true, s.e_true, s.first(5).swapped());
  EXPECT_LT(canonical_distance(g.matrix(), f.matrix().transpose()), 1e-10);
}

TEST(FFromEpipoles, RoundTripThroughEpipoles) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene s = generate_scene(SceneConfig::facing(seed));
    const FundMatrix f = f_from_epipoles_and_corr(s.e_true, s.e_prime_true, s.first(5));
    const auto [e, ep] = epipoles_from_f(f.matrix());
    EXPECT_TRUE(projectively_equal(e.coords(), s.e_true.coords(), 1e-9));
    EXPECT_TRUE(projectively_equal(ep.coords(), s.e_prime_true.coords(), 1e-9));
  }
}

TEST(FFromEpipoles, TooFewOrDegenerate) {
  const Scene& s = s1();
  EXPECT_THROW(f_from_epipoles_and_corr(s.e_true, s.e_prime_true, s.first(2)), GeometryError);
  // three correspondences on one epipolar line pair add a single equation
  CorrSet same_line;
  for (double t : {0.2, 0.5, 0.8}) {
    const Vec3 x = (1 - t) * s.X[0] + t * s.X[0] * 1.3;  // along camera-1 ray of X0
    same_line.pairs.push_back({s.project1(x), s.project2(x)});
  }
  try {
    f_from_epipoles_and_corr(s.e_true, s.e_prime_true, same_line);
    FAIL() << "expected an error";
  } catch (const GeometryError& err) {
    EXPECT_EQ(err.kind(), ErrorKind::underdetermined);
    EXPECT_NE(std::string(err.what()).find("rank"), std::string::npos);
  }
}

TEST(EpipolesFromF, SkewMatrix) {
  Mat3 t;
  t << 0, -1, 0, 1, 0, 0, 0, 0, 0;  // [(0,0,1)]x
  const auto [e, ep] = epipoles_from_f(t);
  EXPECT_EQ(e, HomPoint2(0, 0, 1));
  EXPECT_EQ(ep, HomPoint2(0, 0, 1));
}

TEST(EpipolesFromF, ReferenceScene) {
  const Scene& s = s1();
  const auto [e, ep] = epipoles_from_f(s.F_true.matrix());
  EXPECT_TRUE(projectively_equal(e.coords(), s.e_true.coords(), 1e-9));
  EXPECT_TRUE(projectively_equal(ep.coords(), s.e_prime_true.coords(), 1e-9));
}

TEST(FundMatrix, RejectsFullRank) { EXPECT_THROW(FundMatrix::from_matrix(Mat3::Identity()), GeometryError); }

TEST(FundMatrix, CanonicalScale) {
  const Scene& s = s1();
  const FundMatrix f = FundMatrix::from_matrix(-42.0 * s.F_true.matrix());
  EXPECT_NEAR(f.matrix().norm(), 1.0, 1e-15);
  EXPECT_GT(f.matrix().maxCoeff(), -f.matrix().minCoeff());
  EXPECT_LT((f.matrix() - s.F_true.matrix()).norm(), 1e-15);
}

TEST(SymEpipolarDistance, ZeroOnSceneCorrespondences) {
  const Scene& s = s1();
  for (const auto& c : s.corr.pairs) EXPECT_LT(sym_epipolar_distance(s.F_true, c), 1e-9);
}

TEST(SymEpipolarDistance, PerpendicularOffsetMatchesCameraGeometry) {
  const Scene& s = s1();
  const Vec3 centre2 = -s.R.transpose() * s.t;
  for (const auto& c : s.corr.pairs) {
    const Line2 l = epipolar_transfer(s.F_true, c.p);
    const Vec2 n = l.coords().head<2>().normalized();
    const HomPoint2 moved2 = HomPoint2::from_pixel(c.p_prime.pixel() + 2.0 * n);
    // image-1 epipolar line of the moved point: e joined with the image of a
    // point on its camera-2 viewing ray
    const Vec3 on_ray = centre2 + 5.0 * s.R.transpose() * s.K2.inverse() * moved2.coords();
    const double d1 = join(s.e_true, HomPoint2(s.K1 * on_ray)).distance(c.p.pixel());
    const double d = sym_epipolar_distance(s.F_true, {c.p, moved2});
    EXPECT_NEAR(d, 0.5 * (2.0 + d1), 1e-6);
    EXPECT_GE(d, 1.0 - 1e-9);
  }
}

TEST(EpipolarTransfer, PassesThroughTheEpipole) {
  const Scene& s = s1();
  for (const auto& c : s.corr.pairs) {
    EXPECT_LT(std::abs(epipolar_transfer(s.F_true, c.p).incidence(s.e_prime_true)), 1e-12);
  }
  EXPECT_THROW(epipolar_transfer(s.F_true, s.e_true), GeometryError);
}

TEST(Pipeline, SolveFiveThenRecoverF) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scene s = generate_scene(SceneConfig::facing(seed));
    const CorrSet corr = s.first(5);
    const EpipoleEstimate est = solve_five(s.e_true, corr);
    const FundMatrix f = f_from_epipoles_and_corr(s.e_true, est.e_prime, corr);
    for (std::size_t i = 5; i < s.corr.size(); ++i) EXPECT_LT(sym_epipolar_distance(f, s.corr[i]), 1e-6);
  }
}

TEST(Pipeline, CrossRatioClosure) {
  const Scene& s = s1();
  const CorrSet corr = s.first(5);
  const FundMatrix f = f_from_epipoles_and_corr(s.e_true, solve_five(s.e_true, corr).e_prime, corr);
  for (const auto& q : all_quads(s.corr.size())) {
    const auto [i, j, k, l] = q.indices();
    const double first = cross_ratio_lines(join(s.e_true, s.corr[i].p), join(s.e_true, s.corr[j].p),
                                           join(s.e_true, s.corr[k].p), join(s.e_true, s.corr[l].p));
    const double second = cross_ratio_lines(epipolar_transfer(f, s.corr[i].p), epipolar_transfer(f, s.corr[j].p),
                                            epipolar_transfer(f, s.corr[k].p), epipolar_transfer(f, s.corr[l].p));
    EXPECT_NEAR(second, first, 1e-9 * std::max(1.0, std::abs(first)));
  }
}
