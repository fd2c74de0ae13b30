#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "epiloc/conic.hpp"
#include "epiloc/crossratio.hpp"
#include "epiloc/errors.hpp"
#include "epiloc/fundamental.hpp"
#include "epiloc/scene.hpp"
#include "epiloc/solvers.hpp"

namespace epiloc {

using json = nlohmann::json;

/// A request that does not describe a valid problem (bad shape, missing
/// field). Distinct from GeometryError, which means valid but degenerate data.
class RequestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImageSize {
  int width = 0;
  int height = 0;
};

struct ProblemFile {
  CorrSet corr;  // carries epipole1 / epiline1
  std::optional<ImageSize> image1;
  std::optional<ImageSize> image2;
  bool fmatrix = false;
};

/// Shape checks only: 4 to 6 pairs of equal length, epipole1 for n = 4, 5
/// and epiline1 for n = 6. Throws RequestError.
ProblemFile parse_problem(const json& j);

/// body[key] as a list of [x, y]; throws RequestError.
std::vector<Vec2> parse_pixel_list(const json& body, const char* key);
/// body[key] as {"width", "height"} when present; throws RequestError.
std::optional<ImageSize> parse_image_size(const json& body, const char* key);
/// body[key] as [x, y] (z = 1) or [x, y, z]; throws RequestError.
HomPoint2 parse_point(const json& body, const char* key);
json to_json(const ProblemFile& problem);

json point_json(const HomPoint2& p);   // [x, y, z], z = 1 when finite
json pixel_json(const HomPoint2& p);   // [x, y]
json to_json(const Conic& c);          // [a, b, c, d, e, f]
json to_json(const FundMatrix& f);     // row-major 9-array
json to_json(const EpipoleEstimate& e);
json to_json(const Scene& scene);
json error_json(const GeometryError& err);
json request_error_json(const std::string& message);

/// Problem built from the first n correspondences of a scene: the true
/// epipole for n = 4, 5 and for n = 6 the true epipolar line through the
/// held-out point n.
ProblemFile problem_from_scene(const Scene& scene, std::size_t n);

}  // namespace epiloc
