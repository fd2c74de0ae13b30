#pragma once

#include <string_view>

#include "epiloc/io.hpp"

namespace epiloc {

/// Dispatch by correspondence count: the locus conic for 4, the epipole for 5,
/// the candidate list for 6. With `fmatrix` set (5 or 6 pairs) F is added.
/// Throws RequestError or GeometryError.
json solve_problem(const ProblemFile& problem);

/// Body: epipole1, epipole2, points1, points2 (at least 3 pairs), optional
/// image1 / image2 sizes. Returns F and the epipolar lines of every point in
/// the other image, clipped to that image.
json fmatrix_request(const json& body);

/// Status and JSON body shared by the HTTP service and the CLI:
/// 200 ok, 400 invalid request, 422 degenerate data.
struct ApiResponse {
  int status = 200;
  json body;
};

ApiResponse handle_solve(std::string_view body_text, bool force_fmatrix = false);
ApiResponse handle_fmatrix(std::string_view body_text);

/// One serialization for every output path so CLI and HTTP agree byte for byte.
std::string dump(const json& j);

}  // namespace epiloc
