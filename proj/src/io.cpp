#include "epiloc/io.hpp"

#include <cmath>
#include <string>

namespace epiloc {

namespace {

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw RequestError(what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw RequestError(what + " must contain only numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw RequestError(what + " must be finite");
    out.push_back(d);
  }
  return out;
}

json size_json(const ImageSize& s) { return {{"width", s.width}, {"height", s.height}}; }

json matrix_json(const Mat3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.push_back(m(r, c));
  return out;
}

json line_json(const Line2& l) {
  const Vec3 v = l.coords();
  const double n = std::hypot(v.x(), v.y());
  const Vec3 s = n > 0.0 ? Vec3(v / n) : Vec3(canonical(v));
  return {s.x(), s.y(), s.z()};
}

}  // namespace

std::vector<Vec2> parse_pixel_list(const json& body, const char* key) {
  if (!body.contains(key)) throw RequestError(std::string("missing field '") + key + "'");
  const json& arr = body.at(key);
  if (!arr.is_array()) throw RequestError(std::string(key) + " must be a list of [x, y]");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto v = numbers(arr[i], std::string(key) + "[" + std::to_string(i) + "]");
    if (v.size() != 2) throw RequestError(std::string(key) + "[" + std::to_string(i) + "] must be [x, y]");
    out.emplace_back(v[0], v[1]);
  }
  return out;
}

std::optional<ImageSize> parse_image_size(const json& body, const char* key) {
  if (!body.contains(key)) return std::nullopt;
  const json& s = body.at(key);
  if (!s.is_object() || !s.contains("width") || !s.contains("height") || !s["width"].is_number_integer() ||
      !s["height"].is_number_integer()) {
    throw RequestError(std::string(key) + " must be {\"width\": int, \"height\": int}");
  }
  const ImageSize size{s["width"].get<int>(), s["height"].get<int>()};
  if (size.width <= 0 || size.height <= 0) throw RequestError(std::string(key) + " must be positive");
  return size;
}

HomPoint2 parse_point(const json& body, const char* key) {
  if (!body.contains(key)) throw RequestError(std::string("missing field '") + key + "'");
  const auto v = numbers(body.at(key), key);
  try {
    if (v.size() == 2) return HomPoint2(v[0], v[1], 1.0);
    if (v.size() == 3) return HomPoint2(v[0], v[1], v[2]);
  } catch (const GeometryError& err) {
    throw RequestError(std::string(key) + ": " + err.what());
  }
  throw RequestError(std::string(key) + " must be [x, y] or [x, y, z]");
}

ProblemFile parse_problem(const json& j) {
  if (!j.is_object()) throw RequestError("problem must be a JSON object");
  const auto p1 = parse_pixel_list(j, "points1");
  const auto p2 = parse_pixel_list(j, "points2");
  if (p1.size() != p2.size()) throw RequestError("points1 and points2 must have equal length");
  if (p1.size() < 4 || p1.size() > 6) throw RequestError("between 4 and 6 correspondences are required");

  ProblemFile pf;
  for (std::size_t i = 0; i < p1.size(); ++i) pf.corr.pairs.push_back({HomPoint2::from_pixel(p1[i]), HomPoint2::from_pixel(p2[i])});

  const bool has_epipole = j.contains("epipole1") && !j["epipole1"].is_null();
  const bool has_line = j.contains("epiline1") && !j["epiline1"].is_null();
  const std::size_t n = p1.size();
  if (n <= 5 && !has_epipole) throw RequestError("epipole1 is required with " + std::to_string(n) + " correspondences");
  if (n <= 5 && has_line) throw RequestError("epiline1 is only used with 6 correspondences");
  if (n == 6 && !has_line) throw RequestError("epiline1 is required with 6 correspondences");
  if (n == 6 && has_epipole) throw RequestError("epipole1 is not used with 6 correspondences; give epiline1");

  if (has_epipole) pf.corr.epipole = parse_point(j, "epipole1");
  if (has_line) {
    const auto l = numbers(j["epiline1"], "epiline1");
    if (l.size() != 3) throw RequestError("epiline1 must be [a, b, c]");
    try {
      pf.corr.epiline = Line2(l[0], l[1], l[2]);
    } catch (const GeometryError& err) {
      throw RequestError(std::string("epiline1: ") + err.what());
    }
  }
  pf.image1 = parse_image_size(j, "image1");
  pf.image2 = parse_image_size(j, "image2");
  if (j.contains("fmatrix")) {
    if (!j["fmatrix"].is_boolean()) throw RequestError("fmatrix must be a boolean");
    pf.fmatrix = j["fmatrix"].get<bool>();
  }
  return pf;
}

json to_json(const ProblemFile& problem) {
  json j;
  j["points1"] = json::array();
  j["points2"] = json::array();
  for (const auto& c : problem.corr.pairs) {
    j["points1"].push_back(pixel_json(c.p));
    j["points2"].push_back(pixel_json(c.p_prime));
  }
  if (problem.corr.epipole) j["epipole1"] = point_json(*problem.corr.epipole);
  if (problem.corr.epiline) j["epiline1"] = line_json(*problem.corr.epiline);
  if (problem.image1) j["image1"] = size_json(*problem.image1);
  if (problem.image2) j["image2"] = size_json(*problem.image2);
  if (problem.fmatrix) j["fmatrix"] = true;
  return j;
}

json point_json(const HomPoint2& p) {
  const HomPoint2 r = pixel_representative(p.coords());
  return {r.x(), r.y(), r.z()};
}

json pixel_json(const HomPoint2& p) {
  const Vec2 v = p.pixel();
  return {v.x(), v.y()};
}

json to_json(const Conic& c) {
  json out = json::array();
  for (double k : c.coefficients()) out.push_back(k);
  return out;
}

json to_json(const FundMatrix& f) { return matrix_json(f.matrix()); }

json to_json(const EpipoleEstimate& e) {
  json alternates = json::array();
  for (const auto& a : e.alternates) alternates.push_back(point_json(a));
  return {{"method", to_string(e.method)},
          {"epipole", point_json(e.e_prime)},
          {"residual_rms", e.residual_rms},
          {"residual_rms_pixel", e.residual_rms_pixel},
          {"alternates", alternates}};
}

json to_json(const Scene& s) {
  const SceneConfig& c = s.config;
  json j;
  j["config"] = {{"mode", to_string(c.mode)},
                 {"n_points", c.n_points},
                 {"width", c.width},
                 {"height", c.height},
                 {"focal", c.focal},
                 {"seed", c.seed},
                 {"baseline", c.baseline},
                 {"position_jitter", c.position_jitter},
                 {"rotation_jitter_deg", c.rotation_jitter_deg},
                 {"box_xy", c.box_xy},
                 {"box_z", {c.box_z_min, c.box_z_max}}};
  j["K1"] = matrix_json(s.K1);
  j["K2"] = matrix_json(s.K2);
  j["R"] = matrix_json(s.R);
  j["t"] = {s.t.x(), s.t.y(), s.t.z()};
  j["points3d"] = json::array();
  for (const auto& x : s.X) j["points3d"].push_back({x.x(), x.y(), x.z()});
  j["points1"] = json::array();
  j["points2"] = json::array();
  for (const auto& p : s.corr.pairs) {
    j["points1"].push_back(pixel_json(p.p));
    j["points2"].push_back(pixel_json(p.p_prime));
  }
  j["F"] = to_json(s.F_true);
  j["epipole1"] = point_json(s.e_true);
  j["epipole2"] = point_json(s.e_prime_true);
  return j;
}

json error_json(const GeometryError& err) {
  return {{"error", "degenerate"}, {"kind", to_string(err.kind())}, {"message", err.what()}};
}

json request_error_json(const std::string& message) { return {{"error", "invalid_request"}, {"message", message}}; }

ProblemFile problem_from_scene(const Scene& scene, std::size_t n) {
  if (n < 4 || n > 6) throw RequestError("problems have 4 to 6 correspondences");
  if (scene.corr.size() <= n) throw RequestError("scene has too few points for a held-out line");
  ProblemFile pf;
  pf.corr.pairs.assign(scene.corr.pairs.begin(), scene.corr.pairs.begin() + static_cast<std::ptrdiff_t>(n));
  if (n == 6) pf.corr.epiline = join(scene.e_true, scene.corr[n].p);
  else pf.corr.epipole = scene.e_true;
  pf.image1 = ImageSize{scene.config.width, scene.config.height};
  pf.image2 = pf.image1;
  return pf;
}

}  // namespace epiloc
