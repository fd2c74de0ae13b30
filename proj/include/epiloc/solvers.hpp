#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "epiloc/conic.hpp"
#include "epiloc/crossratio.hpp"

namespace epiloc {

enum class EstimateMethod { four_conic, five_cremona, six_linesearch };

const char* to_string(EstimateMethod m);

struct EpipoleEstimate {
  HomPoint2 e_prime;            // pixels; z = 1 when finite
  double residual_rms = 0.0;    // normalized frame, over all quads
  EstimateMethod method = EstimateMethod::five_cremona;
  std::vector<HomPoint2> alternates;
  double residual_rms_pixel = 0.0;  // display only
};

/// A line in image 1 with two distinct incident points spanning it.
class LineParam {
 public:
  LineParam(const Line2& line, const HomPoint2& anchor_a, const HomPoint2& anchor_b);

  /// Anchors: the foot of the perpendicular from `reference` and the line's
  /// point at infinity.
  static LineParam from_line(const Line2& line, const Vec2& reference);

  const Line2& line() const noexcept { return line_; }
  const HomPoint2& anchor_a() const noexcept { return a_; }
  const HomPoint2& anchor_b() const noexcept { return b_; }

 private:
  Line2 line_;
  HomPoint2 a_;
  HomPoint2 b_;
};

struct FourPointResult {
  Conic conic;             // pixel frame, canonical scale
  Conic conic_normalized;  // conditioned image-2 frame, canonical scale
  ConicClass classification = ConicClass::nondegenerate;
  std::vector<ConicPolyline> branches;
};

/// 4 correspondences + e: the conic in image 2 carrying e'. Branches are
/// sampled inside `viewport` (defaults to a box around the image-2 points).
FourPointResult solve_four(const HomPoint2& e, const CorrSet& corr, std::optional<Viewport> viewport = std::nullopt,
                           std::size_t samples = 256);

/// Which three correspondences the two conics share, and the two remaining
/// ones; `unit` is the fourth reference point of the triangle homography.
struct FiveSplit {
  std::array<std::size_t, 3> shared{0, 1, 2};
  std::size_t unit = 3;
  std::size_t other = 4;
};

/// The ten splits of five indices, primary split first.
std::array<FiveSplit, 10> five_splits(std::span<const std::size_t, 5> indices);

struct FivePointResult {
  EpipoleEstimate estimate;
  FiveSplit split;
  Conic conic_first;   // pixel frame, quad shared ∪ {unit}
  Conic conic_second;  // pixel frame, quad shared ∪ {other}
  double max_square_coefficient = 0.0;  // |a|,|c|,|f| in triangle coordinates
};

namespace detail {

struct CremonaOutcome {
  Vec3 e_prime;  // conditioned image-2 frame, unit norm
  FiveSplit split;
  Conic conic_first;
  Conic conic_second;
  double max_square_coefficient;
};

/// Fourth intersection of the two split conics, trying the primary split
/// first and the remaining nine on failure. `e` is conditioned.
CremonaOutcome cremona_fourth_point(const Vec3& e, const ConditionedCorr& cc, std::span<const std::size_t, 5> indices);

}  // namespace detail

/// 5 correspondences + e: e' as the fourth common point of two conics.
EpipoleEstimate solve_five(const HomPoint2& e, const CorrSet& corr);
FivePointResult solve_five_detailed(const HomPoint2& e, const CorrSet& corr);

struct SixPointConfig {
  std::size_t grid_intervals = 2048;  // per chart
  double bisection_tolerance = 1e-12;
  /// Roots closer than this to a trivial zero of the scan function (e on a
  /// line through two image-1 points, or e' on an image-2 point) are dropped.
  double spurious_tolerance = 1e-6;
};

struct SixPointRoot {
  HomPoint2 e;        // pixels
  HomPoint2 e_prime;  // pixels
  double residual_rms = 0.0;
  double t = 0.0;
  int chart = 0;
};

/// 6 correspondences + a line carrying e: every (e, e') pair on the line that
/// satisfies all cross-ratio constraints, best residual first.
std::vector<SixPointRoot> solve_six(const LineParam& lp, const CorrSet& corr, const SixPointConfig& config = {});

/// Picks the candidate e' with smallest residual_rms; ties within 1e-12 keep
/// the lower index. The rest become alternates.
EpipoleEstimate rank_candidates(std::span<const HomPoint2> candidates, const HomPoint2& e, const CorrSet& corr,
                                EstimateMethod method = EstimateMethod::five_cremona);

}  // namespace epiloc
