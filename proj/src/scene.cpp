#include "epiloc/scene.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <numbers>
#include <string>

#include "epiloc/random.hpp"

namespace epiloc {

const char* to_string(SceneMode m) { return m == SceneMode::facing ? "facing" : "lateral"; }

SceneConfig SceneConfig::s1() {
  SceneConfig c;
  c.seed = 42;
  c.position_jitter = 0.0;
  return c;
}

SceneConfig SceneConfig::facing(std::uint64_t seed, std::size_t n_points) {
  SceneConfig c;
  c.seed = seed;
  c.n_points = n_points;
  return c;
}

SceneConfig SceneConfig::lateral(std::uint64_t seed, std::size_t n_points) {
  SceneConfig c;
  c.mode = SceneMode::lateral;
  c.seed = seed;
  c.n_points = n_points;
  c.baseline = 1.5;
  c.position_jitter = 0.2;
  c.rotation_jitter_deg = 3.0;
  c.box_z_min = 5.0;
  c.box_z_max = 9.0;
  return c;
}

namespace {

constexpr int kMaxAttempts = 1000;

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

Mat3 intrinsics(const SceneConfig& c) {
  Mat3 k;
  k << c.focal, 0.0, 0.5 * c.width, 0.0, c.focal, 0.5 * c.height, 0.0, 0.0, 1.0;
  return k;
}

// Rows are the camera axes expressed in world coordinates; image y points down.
Mat3 look_at(const Vec3& centre, const Vec3& target) {
  const Vec3 z = (target - centre).normalized();
  const Vec3 x = Vec3::UnitY().cross(z).normalized();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.row(0) = x;
  r.row(1) = y;
  r.row(2) = z;
  return r;
}

Mat3 small_rotation(Rng& rng, double half_width_deg) {
  const double w = half_width_deg * std::numbers::pi / 180.0;
  const double ax = rng.uniform(-w, w);
  const double ay = rng.uniform(-w, w);
  const double az = rng.uniform(-w, w);
  return (Eigen::AngleAxisd(az, Vec3::UnitZ()) * Eigen::AngleAxisd(ay, Vec3::UnitY()) *
          Eigen::AngleAxisd(ax, Vec3::UnitX()))
      .toRotationMatrix();
}

bool inside_image(const Vec3& p, const SceneConfig& c) {
  if (!(p.z() > 0.0)) return false;
  const double x = p.x() / p.z();
  const double y = p.y() / p.z();
  return x >= 0.0 && x <= c.width && y >= 0.0 && y <= c.height;
}

}  // namespace

Mat3 fundamental_from_cameras(const Mat3& K1, const Mat3& K2, const Mat3& R, const Vec3& t) {
  return K2.inverse().transpose() * skew(t) * R * K1.inverse();
}

HomPoint2 Scene::project1(const Vec3& x) const {
  const Vec3 p = K1 * x;
  return HomPoint2(p.x() / p.z(), p.y() / p.z(), 1.0);
}

HomPoint2 Scene::project2(const Vec3& x) const {
  const Vec3 p = K2 * (R * x + t);
  return HomPoint2(p.x() / p.z(), p.y() / p.z(), 1.0);
}

CorrSet Scene::first(std::size_t n) const {
  CorrSet out;
  out.epipole = e_true;
  out.pairs.assign(corr.pairs.begin(), corr.pairs.begin() + static_cast<std::ptrdiff_t>(std::min(n, corr.size())));
  return out;
}

Scene generate_scene(const SceneConfig& config) {
  if (config.n_points < 8) {
    throw GeometryError(ErrorKind::generation_failure, "scenes need at least 8 points");
  }
  Rng rng(config.seed);
  const Mat3 K = intrinsics(config);
  const Vec3 target(0.0, 0.0, 0.5 * (config.box_z_min + config.box_z_max));
  const bool facing = config.mode == SceneMode::facing;

  Mat3 R;
  Vec3 centre;
  bool placed = false;
  for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
    const double j = config.position_jitter;
    centre = facing ? Vec3(rng.uniform(-j, j), rng.uniform(-j, j), config.baseline)
                    : Vec3(config.baseline + rng.uniform(-j, j), rng.uniform(-j, j), rng.uniform(-j, j));
    R = small_rotation(rng, config.rotation_jitter_deg) * look_at(centre, target);
    const Vec3 e = K * centre;
    const Vec3 e_prime = K * (R * (Vec3::Zero() - centre));
    const bool in1 = inside_image(e, config);
    const bool in2 = inside_image(e_prime, config);
    placed = facing ? (in1 && in2) : (!in1 && !in2);
  }
  if (!placed) throw GeometryError(ErrorKind::generation_failure, "could not place camera 2");
  const Vec3 t = -R * centre;

  std::vector<Vec3> points;
  points.reserve(config.n_points);
  for (std::size_t i = 0; i < config.n_points; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
      const Vec3 x(rng.uniform(-config.box_xy, config.box_xy), rng.uniform(-config.box_xy, config.box_xy),
                   rng.uniform(config.box_z_min, config.box_z_max));
      ok = inside_image(K * x, config) && inside_image(K * (R * x + t), config);
      if (ok) points.push_back(x);
    }
    if (!ok) {
      throw GeometryError(ErrorKind::generation_failure,
                          "could not place point " + std::to_string(i) + " in both frusta");
    }
  }

  const FundMatrix F = FundMatrix::from_matrix(fundamental_from_cameras(K, K, R, t));
  Scene scene{config,
              K,
              K,
              R,
              t,
              points,
              CorrSet{},
              F,
              pixel_representative(K * centre),
              pixel_representative(K * t)};
  for (const auto& x : points) scene.corr.pairs.push_back({scene.project1(x), scene.project2(x)});
  scene.corr.epipole = scene.e_true;
  return scene;
}

FundMatrix eight_point(const CorrSet& corr) {
  if (corr.size() < 8) throw GeometryError(ErrorKind::degenerate_data, "eight_point needs at least 8 correspondences");
  const ConditionedCorr cc(corr);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(corr.size()), 9);
  for (std::size_t s = 0; s < corr.size(); ++s) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) design(static_cast<Eigen::Index>(s), 3 * r + c) = cc.p_prime(s)[r] * cc.p(s)[c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const auto rank = static_cast<int>((sv.array() > 1e-10 * sv[0]).count());
  if (rank < 8) throw GeometryError(ErrorKind::degenerate_data, "design matrix has rank " + std::to_string(rank));
  const Eigen::VectorXd f = svd.matrixV().col(8);
  Mat3 fn;
  fn << f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8];

  Eigen::JacobiSVD<Mat3> rank2(fn, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec3 s = rank2.singularValues();
  s[2] = 0.0;
  fn = rank2.matrixU() * s.asDiagonal() * rank2.matrixV().transpose();
  return FundMatrix::from_matrix(cc.image2().matrix().transpose() * fn * cc.image1().matrix());
}

CorrSet add_noise(const CorrSet& corr, const NoiseSpec& spec) {
  if (spec.sigma < 0.0) throw GeometryError(ErrorKind::degenerate_input, "noise sigma must be non-negative");
  Rng rng(spec.seed);
  const auto jitter = [&](const HomPoint2& p) {
    if (!p.is_finite()) return p;
    const Vec2 px = p.pixel();
    const double dx = rng.normal() * spec.sigma;
    const double dy = rng.normal() * spec.sigma;
    return HomPoint2(px.x() + dx, px.y() + dy, 1.0);
  };
  CorrSet out = corr;
  for (auto& c : out.pairs) {
    c.p = jitter(c.p);
    c.p_prime = jitter(c.p_prime);
  }
  if (spec.perturb_epipole && out.epipole) out.epipole = jitter(*out.epipole);
  return out;
}

}  // namespace epiloc
