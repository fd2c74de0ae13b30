#include "epiloc/api.hpp"

#include <algorithm>
#include <limits>

#include "epiloc/fundamental.hpp"

namespace epiloc {

namespace {

constexpr std::size_t kBranchSamples = 256;

Viewport image_viewport(const std::optional<ImageSize>& size, const std::vector<HomPoint2>& points,
                        const std::optional<HomPoint2>& extra = std::nullopt) {
  if (size) return Viewport{0.0, 0.0, double(size->width), double(size->height)};
  Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  Vec2 hi = -lo;
  auto grow = [&](const HomPoint2& p) {
    if (!p.is_finite()) return;
    lo = lo.cwiseMin(p.pixel());
    hi = hi.cwiseMax(p.pixel());
  };
  for (const auto& p : points) grow(p);
  if (extra) grow(*extra);
  const double margin = 0.1 * std::max({hi.x() - lo.x(), hi.y() - lo.y(), 10.0});
  return Viewport{lo.x() - margin, lo.y() - margin, hi.x() + margin, hi.y() + margin};
}

// Part of the line inside the rectangle, or null when it misses it.
json clip_segment(const Line2& line, const Viewport& v) {
  const double a = line.x(), b = line.y(), c = line.z();
  std::vector<Vec2> hits;
  if (std::abs(b) > 0.0) {
    for (double x : {v.x_min, v.x_max}) {
      const double y = -(a * x + c) / b;
      if (y >= v.y_min && y <= v.y_max) hits.emplace_back(x, y);
    }
  }
  if (std::abs(a) > 0.0) {
    for (double y : {v.y_min, v.y_max}) {
      const double x = -(b * y + c) / a;
      if (x >= v.x_min && x <= v.x_max) hits.emplace_back(x, y);
    }
  }
  if (hits.size() < 2) return nullptr;
  const Vec2 dir(b, -a);
  const auto [lo, hi] = std::minmax_element(hits.begin(), hits.end(),
                                            [&](const Vec2& p, const Vec2& q) { return p.dot(dir) < q.dot(dir); });
  return json::array({{lo->x(), lo->y()}, {hi->x(), hi->y()}});
}

json epipolar_lines(const FundMatrix& f, const std::vector<HomPoint2>& from, const Viewport& into) {
  json out = json::array();
  for (const auto& p : from) {
    const Line2 l = epipolar_transfer(f, p);
    const double n = std::hypot(l.x(), l.y());
    const Vec3 s = n > 0.0 ? Vec3(l.coords() / n) : l.coords().normalized();
    out.push_back({{"line", {s.x(), s.y(), s.z()}}, {"segment", clip_segment(l, into)}});
  }
  return out;
}

json parse_text(std::string_view text) {
  if (text.empty()) throw RequestError("empty request body");
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) throw RequestError("request body is not valid JSON");
  return j;
}

template <class Fn>
ApiResponse guarded(Fn&& fn) {
  try {
    return {200, fn()};
  } catch (const RequestError& err) {
    return {400, request_error_json(err.what())};
  } catch (const json::exception& err) {
    return {400, request_error_json(err.what())};
  } catch (const GeometryError& err) {
    return {422, error_json(err)};
  }
}

}  // namespace

json solve_problem(const ProblemFile& problem) {
  const CorrSet& corr = problem.corr;
  const std::size_t n = corr.size();
  if (problem.fmatrix && n == 4) throw RequestError("fmatrix needs 5 or 6 correspondences");

  if (n == 4) {
    std::optional<Viewport> view;
    if (problem.image2) view = image_viewport(problem.image2, {});
    const FourPointResult r = solve_four(*corr.epipole, corr, view, kBranchSamples);
    json branches = json::array();
    for (const auto& b : r.branches) {
      json pts = json::array();
      for (const auto& p : b.points) pts.push_back(pixel_json(p));
      branches.push_back({{"closed", b.closed}, {"points", pts}});
    }
    return {{"method", to_string(EstimateMethod::four_conic)},
            {"conic", to_json(r.conic)},
            {"classification", to_string(r.classification)},
            {"branches", branches}};
  }

  if (n == 5) {
    const EpipoleEstimate est = solve_five(*corr.epipole, corr);
    json out = to_json(est);
    if (problem.fmatrix) out["F"] = to_json(f_from_epipoles_and_corr(*corr.epipole, est.e_prime, corr));
    return out;
  }

  Vec2 centroid = Vec2::Zero();
  for (const auto& c : corr.pairs) centroid += c.p.pixel() / static_cast<double>(n);
  const auto roots = solve_six(LineParam::from_line(*corr.epiline, centroid), corr);
  json candidates = json::array();
  for (const auto& r : roots) {
    candidates.push_back({{"epipole1", point_json(r.e)},
                          {"epipole", point_json(r.e_prime)},
                          {"residual_rms", r.residual_rms},
                          {"t", r.t},
                          {"chart", r.chart}});
  }
  json out = {{"method", to_string(EstimateMethod::six_linesearch)}, {"candidates", candidates}};
  if (problem.fmatrix) out["F"] = to_json(f_from_epipoles_and_corr(roots.front().e, roots.front().e_prime, corr));
  return out;
}

json fmatrix_request(const json& body) {
  if (!body.is_object()) throw RequestError("body must be a JSON object");
  const HomPoint2 e = parse_point(body, "epipole1");
  const HomPoint2 e_prime = parse_point(body, "epipole2");
  const auto p1 = parse_pixel_list(body, "points1");
  const auto p2 = parse_pixel_list(body, "points2");
  if (p1.size() != p2.size()) throw RequestError("points1 and points2 must have equal length");
  if (p1.size() < 3) throw RequestError("at least 3 correspondences are required");
  CorrSet corr;
  for (std::size_t i = 0; i < p1.size(); ++i) corr.pairs.push_back({HomPoint2::from_pixel(p1[i]), HomPoint2::from_pixel(p2[i])});
  const auto size1 = parse_image_size(body, "image1");
  const auto size2 = parse_image_size(body, "image2");

  const FundMatrix f = f_from_epipoles_and_corr(e, e_prime, corr);
  const auto view1 = image_viewport(size1, corr.image1(), e);
  const auto view2 = image_viewport(size2, corr.image2(), e_prime);
  return {{"F", to_json(f)},
          {"epipole1", point_json(f.e())},
          {"epipole2", point_json(f.e_prime())},
          {"lines1", epipolar_lines(f.transposed(), corr.image2(), view1)},
          {"lines2", epipolar_lines(f, corr.image1(), view2)}};
}

ApiResponse handle_solve(std::string_view body_text, bool force_fmatrix) {
  return guarded([&] {
    ProblemFile pf = parse_problem(parse_text(body_text));
    pf.fmatrix = pf.fmatrix || force_fmatrix;
    return solve_problem(pf);
  });
}

ApiResponse handle_fmatrix(std::string_view body_text) {
  return guarded([&] { return fmatrix_request(parse_text(body_text)); });
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace epiloc
