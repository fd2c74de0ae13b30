#include "epiloc/solvers.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <string>

namespace epiloc {

const char* to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::four_conic: return "four_conic";
    case EstimateMethod::five_cremona: return "five_cremona";
    case EstimateMethod::six_linesearch: return "six_linesearch";
  }
  return "unknown";
}

LineParam::LineParam(const Line2& line, const HomPoint2& anchor_a, const HomPoint2& anchor_b)
    : line_(line), a_(anchor_a), b_(anchor_b) {
  if (std::abs(line_.incidence(a_)) > 1e-9 || std::abs(line_.incidence(b_)) > 1e-9) {
    throw GeometryError(ErrorKind::degenerate_input, "line anchors must lie on the line");
  }
  if (a_ == b_) throw GeometryError(ErrorKind::degenerate_input, "line anchors must be distinct");
}

LineParam LineParam::from_line(const Line2& line, const Vec2& reference) {
  const double a = line.x(), b = line.y(), c = line.z();
  const double g = a * a + b * b;
  if (!(g > 0.0)) throw GeometryError(ErrorKind::degenerate_input, "the line at infinity cannot carry an epipole search");
  const double s = (a * reference.x() + b * reference.y() + c) / g;
  const HomPoint2 foot(reference.x() - s * a, reference.y() - s * b, 1.0);
  return LineParam(line, foot, HomPoint2(b, -a, 0.0));
}

namespace {

Viewport default_viewport(const CorrSet& corr) {
  Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  Vec2 hi = -lo;
  for (const auto& c : corr.pairs) {
    if (!c.p_prime.is_finite()) continue;
    lo = lo.cwiseMin(c.p_prime.pixel());
    hi = hi.cwiseMax(c.p_prime.pixel());
  }
  const double margin = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1.0});
  return Viewport{lo.x() - margin, lo.y() - margin, hi.x() + margin, hi.y() + margin};
}

// Newton steps on z ↦ (zᵀC1z, zᵀC2z) within the plane orthogonal to z. The
// Cremona point loses digits through the triangle homography when points sit
// far from the image; a couple of steps bring it back to machine precision.
Vec3 polish_on_conics(Vec3 z, const Conic& c1, const Conic& c2) {
  const Mat3 m1 = c1.matrix(), m2 = c2.matrix();
  const auto misfit = [&](const Vec3& v) { return std::hypot(v.dot(m1 * v), v.dot(m2 * v)); };
  for (int iter = 0; iter < 4; ++iter) {
    const double before = misfit(z);
    if (before == 0.0) break;
    Eigen::JacobiSVD<Mat3> basis(Mat3(z * z.transpose()), Eigen::ComputeFullU);
    const Vec3 a = basis.matrixU().col(1), b = basis.matrixU().col(2);
    Eigen::Matrix2d jac;
    jac << 2.0 * a.dot(m1 * z), 2.0 * b.dot(m1 * z), 2.0 * a.dot(m2 * z), 2.0 * b.dot(m2 * z);
    const Eigen::Vector2d rhs(z.dot(m1 * z), z.dot(m2 * z));
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(jac);
    if (!lu.isInvertible()) break;
    const Eigen::Vector2d step = lu.solve(rhs);
    const Vec3 next = (z - step.x() * a - step.y() * b).normalized();
    if (!(misfit(next) < before)) break;
    z = next;
  }
  return z;
}

detail::CremonaOutcome cremona_for_split(const Vec3& e, const ConditionedCorr& cc, const FiveSplit& split) {
  const auto [s0, s1, s2] = split.shared;
  const Conic first = conic_from_4corr_normalized(e, QuadIndex(s0, s1, s2, split.unit), cc);
  const Conic second = conic_from_4corr_normalized(e, QuadIndex(s0, s1, s2, split.other), cc);

  const Homography2 h = homography_to_standard_triangle(HomPoint2(cc.p_prime(s0)), HomPoint2(cc.p_prime(s1)),
                                                        HomPoint2(cc.p_prime(s2)), HomPoint2(cc.p_prime(split.unit)));
  const Conic tf = transform_conic(first, h);
  const Conic ts = transform_conic(second, h);
  const double square = std::max({std::abs(tf.a()), std::abs(tf.c()), std::abs(tf.f()), std::abs(ts.a()),
                                  std::abs(ts.c()), std::abs(ts.f())});
  if (!(square < 1e-8)) {
    throw GeometryError(ErrorKind::ill_conditioned,
                        "conics do not pass through the triangle vertices (square coefficient " +
                            std::to_string(square) + ")");
  }

  // b xy + d xz + e yz = 0 is carried by (x,y,z) ↦ (yz,zx,xy) onto the line (e, d, b).
  const Vec3 line_first = Vec3(tf.e(), tf.d(), tf.b()).normalized();
  const Vec3 line_second = Vec3(ts.e(), ts.d(), ts.b()).normalized();
  if (std::min((line_first - line_second).norm(), (line_first + line_second).norm()) < 1e-10) {
    throw GeometryError(ErrorKind::underdetermined, "the two conics coincide; the fourth point is not determined");
  }
  const Vec3 meet_point = line_first.cross(line_second).normalized();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(meet_point[i]) < 1e-10) {
      throw GeometryError(ErrorKind::coincident_solution,
                          "the fourth intersection coincides with a shared point; try a different quad split");
    }
  }
  const Vec3 in_triangle(meet_point.y() * meet_point.z(), meet_point.z() * meet_point.x(),
                         meet_point.x() * meet_point.y());
  const Vec3 e_prime = polish_on_conics((h.matrix().inverse() * in_triangle).normalized(), first, second);
  return {e_prime, split, first, second, square};
}

}  // namespace

std::array<FiveSplit, 10> five_splits(std::span<const std::size_t, 5> indices) {
  std::array<FiveSplit, 10> out;
  std::size_t n = 0;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b)
      for (std::size_t c = b + 1; c < 5; ++c) {
        std::array<std::size_t, 2> rest{};
        std::size_t r = 0;
        for (std::size_t x = 0; x < 5; ++x)
          if (x != a && x != b && x != c) rest[r++] = x;
        out[n++] = FiveSplit{{indices[a], indices[b], indices[c]}, indices[rest[0]], indices[rest[1]]};
      }
  return out;
}

namespace detail {

CremonaOutcome cremona_fourth_point(const Vec3& e, const ConditionedCorr& cc, std::span<const std::size_t, 5> indices) {
  std::optional<GeometryError> first_error;
  for (const auto& split : five_splits(indices)) {
    try {
      return cremona_for_split(e, cc, split);
    } catch (const GeometryError& err) {
      if (!first_error) first_error = err;
    }
  }
  throw GeometryError(first_error->kind(), std::string(first_error->what()) + " (all ten quad splits failed)");
}

}  // namespace detail

FourPointResult solve_four(const HomPoint2& e, const CorrSet& corr, std::optional<Viewport> viewport,
                           std::size_t samples) {
  if (corr.size() != 4) throw GeometryError(ErrorKind::degenerate_input, "solve_four needs exactly 4 correspondences");
  const ConditionedCorr cc(corr);
  const Conic normalized =
      conic_from_4corr_normalized(cc.image1().point_to_normalized(e.coords()), QuadIndex(0, 1, 2, 3), cc);
  FourPointResult out{cc.image2().conic_to_pixel(normalized), normalized, conic_classify(normalized), {}};
  if (out.classification == ConicClass::nondegenerate) {
    out.branches = conic_sample(out.conic, viewport.value_or(default_viewport(corr)), samples);
  }
  return out;
}

FivePointResult solve_five_detailed(const HomPoint2& e, const CorrSet& corr) {
  if (corr.size() != 5) throw GeometryError(ErrorKind::degenerate_input, "solve_five needs exactly 5 correspondences");
  const ConditionedCorr cc(corr);
  const Vec3 en = cc.image1().point_to_normalized(e.coords());
  constexpr std::array<std::size_t, 5> kIndices{0, 1, 2, 3, 4};
  const auto outcome = detail::cremona_fourth_point(en, cc, kIndices);

  FivePointResult out{
      EpipoleEstimate{pixel_representative(cc.image2().point_to_pixel(outcome.e_prime)),
                      residual_rms(en, outcome.e_prime, cc), EstimateMethod::five_cremona, {}, 0.0},
      outcome.split, cc.image2().conic_to_pixel(outcome.conic_first), cc.image2().conic_to_pixel(outcome.conic_second),
      outcome.max_square_coefficient};
  out.estimate.residual_rms_pixel = residual_rms_pixel(e, out.estimate.e_prime, corr);
  return out;
}

EpipoleEstimate solve_five(const HomPoint2& e, const CorrSet& corr) { return solve_five_detailed(e, corr).estimate; }

std::vector<SixPointRoot> solve_six(const LineParam& lp, const CorrSet& corr, const SixPointConfig& config) {
  if (corr.size() != 6) throw GeometryError(ErrorKind::degenerate_input, "solve_six needs exactly 6 correspondences");
  if (config.grid_intervals < 2) throw GeometryError(ErrorKind::degenerate_input, "grid needs at least 2 intervals");
  const ConditionedCorr cc(corr);
  const Vec3 a = cc.image1().point_to_normalized(lp.anchor_a().coords()).normalized();
  const Vec3 b = cc.image1().point_to_normalized(lp.anchor_b().coords()).normalized();
  constexpr std::array<std::size_t, 5> kFive{0, 1, 2, 3, 4};
  const QuadIndex closing(1, 2, 3, 5);

  const auto epipole_at = [&](int chart, double t) -> Vec3 { return chart == 0 ? Vec3(a + t * b) : Vec3(t * a + b); };
  struct Sample {
    Vec3 e_prime;
    double g;
  };
  const auto evaluate = [&](int chart, double t) -> std::optional<Sample> {
    const Vec3 e = epipole_at(chart, t);
    try {
      const auto outcome = detail::cremona_fourth_point(e, cc, kFive);
      return Sample{outcome.e_prime, quad_residual(e, outcome.e_prime, closing, cc)};
    } catch (const GeometryError&) {
      return std::nullopt;
    }
  };

  const auto is_spurious = [&](const Vec3& e, const Vec3& e_prime) {
    for (std::size_t i = 0; i < cc.size(); ++i) {
      if (projectively_equal(e_prime, cc.p_prime(i), config.spurious_tolerance)) return true;
      for (std::size_t j = i + 1; j < cc.size(); ++j) {
        if (std::abs(normalized_det3(e, cc.p(i), cc.p(j))) < config.spurious_tolerance) return true;
      }
    }
    return false;
  };

  struct Candidate {
    Vec3 e;
    Vec3 e_prime;
    double t;
    int chart;
  };
  std::vector<Candidate> found;
  double min_abs_g = std::numeric_limits<double>::infinity();
  const std::size_t n = config.grid_intervals;

  for (int chart = 0; chart < 2; ++chart) {
    std::vector<double> ts(n + 1);
    std::vector<std::optional<Sample>> samples(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      ts[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
      samples[i] = evaluate(chart, ts[i]);
      if (samples[i]) min_abs_g = std::min(min_abs_g, std::abs(samples[i]->g));
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (samples[i] && samples[i]->g == 0.0) {
        found.push_back({epipole_at(chart, ts[i]), samples[i]->e_prime, ts[i], chart});
        continue;
      }
      if (i == n || !samples[i] || !samples[i + 1] || samples[i + 1]->g == 0.0) continue;
      if ((samples[i]->g < 0.0) == (samples[i + 1]->g < 0.0)) continue;

      double lo = ts[i], hi = ts[i + 1];
      const bool lo_negative = samples[i]->g < 0.0;
      Sample best = *samples[i];
      bool broken = false;
      while (hi - lo > config.bisection_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const auto s = evaluate(chart, mid);
        if (!s) {
          broken = true;
          break;
        }
        best = *s;
        if (s->g == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((s->g < 0.0) == lo_negative) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (broken) continue;
      const double t = 0.5 * (lo + hi);
      const auto final_sample = evaluate(chart, t);
      if (!final_sample) continue;
      found.push_back({epipole_at(chart, t), final_sample->e_prime, t, chart});
    }
  }

  std::vector<SixPointRoot> roots;
  std::vector<Vec3> kept;
  std::vector<double> rms;
  for (const auto& c : found) {
    if (is_spurious(c.e, c.e_prime)) continue;
    if (std::any_of(kept.begin(), kept.end(), [&](const Vec3& k) { return projectively_equal(k, c.e, 1e-8); })) continue;
    kept.push_back(c.e);
    roots.push_back({pixel_representative(cc.image1().point_to_pixel(c.e)),
                     pixel_representative(cc.image2().point_to_pixel(c.e_prime)), residual_rms(c.e, c.e_prime, cc), c.t,
                     c.chart});
  }
  if (roots.empty()) {
    throw GeometryError(ErrorKind::no_solution, "no epipole pair found on the line (min |g| = " +
                                                    std::to_string(min_abs_g) + ")");
  }
  std::stable_sort(roots.begin(), roots.end(),
                   [](const SixPointRoot& x, const SixPointRoot& y) { return x.residual_rms < y.residual_rms; });
  return roots;
}

EpipoleEstimate rank_candidates(std::span<const HomPoint2> candidates, const HomPoint2& e, const CorrSet& corr,
                                EstimateMethod method) {
  if (candidates.empty()) throw GeometryError(ErrorKind::degenerate_input, "no candidates to rank");
  const ConditionedCorr cc(corr);
  const Vec3 en = cc.image1().point_to_normalized(e.coords());
  std::size_t best = 0;
  double best_rms = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double r = residual_rms(en, cc.image2().point_to_normalized(candidates[i].coords()), cc);
    if (r < best_rms - 1e-12) {
      best = i;
      best_rms = r;
    }
  }
  EpipoleEstimate out{candidates[best], best_rms, method, {}, residual_rms_pixel(e, candidates[best], corr)};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i != best) out.alternates.push_back(candidates[i]);
  }
  return out;
}

}  // namespace epiloc
