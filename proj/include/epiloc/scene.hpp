#pragma once

#include <cstdint>
#include <vector>

#include "epiloc/conic.hpp"
#include "epiloc/crossratio.hpp"
#include "epiloc/fundamental.hpp"

namespace epiloc {

enum class SceneMode { facing, lateral };

const char* to_string(SceneMode m);

struct SceneConfig {
  SceneMode mode = SceneMode::facing;
  std::size_t n_points = 12;
  int width = 640;
  int height = 480;
  double focal = 800.0;
  std::uint64_t seed = 42;

  /// Distance of camera 2 from camera 1 (along z when facing, x when lateral).
  double baseline = 10.0;
  /// Uniform half-width of the camera-2 position perturbation.
  double position_jitter = 1.0;
  /// Uniform half-width, per axis, of the camera-2 rotation perturbation.
  double rotation_jitter_deg = 5.0;

  /// Box the 3D points are drawn from (camera-1 frame).
  double box_xy = 2.0;
  double box_z_min = 3.0;
  double box_z_max = 7.0;

  /// The reference fixture: camera 2 exactly at (0, 0, 10) facing back,
  /// 12 points, seed 42.
  static SceneConfig s1();
  static SceneConfig facing(std::uint64_t seed, std::size_t n_points = 12);
  static SceneConfig lateral(std::uint64_t seed, std::size_t n_points = 12);
};

struct Scene {
  SceneConfig config;
  Mat3 K1;
  Mat3 K2;
  Mat3 R;  // camera 2 rotation: x2 = R x1 + t
  Vec3 t;
  std::vector<Vec3> X;
  CorrSet corr;  // exact projections, pixels
  FundMatrix F_true;
  HomPoint2 e_true;
  HomPoint2 e_prime_true;

  Viewport image1() const { return {0.0, 0.0, double(config.width), double(config.height)}; }
  Viewport image2() const { return image1(); }

  HomPoint2 project1(const Vec3& x) const;
  HomPoint2 project2(const Vec3& x) const;

  /// First n correspondences, carrying e_true as the known epipole.
  CorrSet first(std::size_t n) const;
};

/// Deterministic per seed. Throws generation_failure when the cameras or the
/// points cannot be placed after 1000 attempts.
Scene generate_scene(const SceneConfig& config);

/// K2⁻ᵀ [t]× R K1⁻¹.
Mat3 fundamental_from_cameras(const Mat3& K1, const Mat3& K2, const Mat3& R, const Vec3& t);

/// Normalized 8-point algorithm with rank-2 enforcement.
FundMatrix eight_point(const CorrSet& corr);

struct NoiseSpec {
  double sigma = 0.0;  // pixels, per coordinate
  std::uint64_t seed = 0;
  bool perturb_epipole = false;
};

CorrSet add_noise(const CorrSet& corr, const NoiseSpec& spec);

}  // namespace epiloc
