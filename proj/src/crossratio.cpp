#include "epiloc/crossratio.hpp"

#include <algorithm>
#include <string>

namespace epiloc {

std::vector<HomPoint2> CorrSet::image1() const {
  std::vector<HomPoint2> out;
  out.reserve(pairs.size());
  for (const auto& c : pairs) out.push_back(c.p);
  return out;
}

std::vector<HomPoint2> CorrSet::image2() const {
  std::vector<HomPoint2> out;
  out.reserve(pairs.size());
  for (const auto& c : pairs) out.push_back(c.p_prime);
  return out;
}

CorrSet CorrSet::swapped() const {
  CorrSet out;
  out.pairs.reserve(pairs.size());
  for (const auto& c : pairs) out.pairs.push_back({c.p_prime, c.p});
  return out;
}

CorrSet CorrSet::subset(std::span<const std::size_t> indices) const {
  CorrSet out;
  out.epipole = epipole;
  out.epiline = epiline;
  for (std::size_t i : indices) out.pairs.push_back(pairs.at(i));
  return out;
}

QuadIndex::QuadIndex(std::size_t i, std::size_t j, std::size_t k, std::size_t l) : idx_{i, j, k, l} {
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      if (idx_[a] == idx_[b]) throw GeometryError(ErrorKind::degenerate_input, "quad indices must be distinct");
    }
  }
}

QuadIndex QuadIndex::sorted() const {
  auto s = idx_;
  std::sort(s.begin(), s.end());
  return QuadIndex(s[0], s[1], s[2], s[3]);
}

bool QuadIndex::contains(std::size_t index) const {
  return std::find(idx_.begin(), idx_.end(), index) != idx_.end();
}

std::vector<QuadIndex> all_quads(std::size_t n) {
  std::vector<QuadIndex> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) out.emplace_back(i, j, k, l);
  return out;
}

std::array<QuadIndex, 3> inequivalent_orderings(const QuadIndex& q) {
  return {QuadIndex(q.i(), q.j(), q.k(), q.l()), QuadIndex(q.i(), q.j(), q.l(), q.k()),
          QuadIndex(q.i(), q.k(), q.l(), q.j())};
}

ConditionedCorr::ConditionedCorr(const CorrSet& corr)
    : t1_(Conditioner::fit(corr.image1())), t2_(Conditioner::fit(corr.image2())) {
  p_.reserve(corr.size());
  pp_.reserve(corr.size());
  for (const auto& c : corr.pairs) {
    p_.push_back(t1_.point_to_normalized(c.p.coords()));
    pp_.push_back(t2_.point_to_normalized(c.p_prime.coords()));
  }
}

double quad_residual(const Vec3& e, const Vec3& e_prime, const QuadIndex& q, const ConditionedCorr& cc) {
  const auto [i, j, k, l] = q.indices();
  const double lhs = det3(e, cc.p(i), cc.p(j)) * det3(e, cc.p(k), cc.p(l)) *
                     det3(e_prime, cc.p_prime(i), cc.p_prime(k)) * det3(e_prime, cc.p_prime(j), cc.p_prime(l));
  const double rhs = det3(e_prime, cc.p_prime(i), cc.p_prime(j)) * det3(e_prime, cc.p_prime(k), cc.p_prime(l)) *
                     det3(e, cc.p(i), cc.p(k)) * det3(e, cc.p(j), cc.p(l));
  return lhs - rhs;
}

void check_quad(const Vec3& e, const QuadIndex& q, const ConditionedCorr& cc) {
  const auto& idx = q.indices();
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      if (std::abs(normalized_det3(e, cc.p(idx[a]), cc.p(idx[b]))) < kCollinearTolerance) {
        throw GeometryError(ErrorKind::redundant_configuration,
                            "epipole is collinear with points " + std::to_string(idx[a]) + " and " +
                                std::to_string(idx[b]) + " in image 1");
      }
    }
  }
}

double constraint_residual(const HomPoint2& e, const HomPoint2& e_prime, const QuadIndex& q, const CorrSet& corr) {
  const ConditionedCorr cc(corr);
  const Vec3 en = cc.image1().point_to_normalized(e.coords());
  const Vec3 epn = cc.image2().point_to_normalized(e_prime.coords());
  check_quad(en, q, cc);
  return quad_residual(en, epn, q, cc);
}

Conic conic_from_4corr_normalized(const Vec3& e, const QuadIndex& q, const ConditionedCorr& cc) {
  check_quad(e, q, cc);
  // The residual is a quadratic form in e'; recover it from six probes.
  const auto form = [&](double x, double y, double z) { return quad_residual(e, Vec3(x, y, z), q, cc); };
  const double a = form(1, 0, 0);
  const double c = form(0, 1, 0);
  const double f = form(0, 0, 1);
  const double b = form(1, 1, 0) - a - c;
  const double d = form(1, 0, 1) - a - f;
  const double ee = form(0, 1, 1) - c - f;
  return Conic(a, b, c, d, ee, f);
}

Conic conic_from_4corr(const HomPoint2& e, const QuadIndex& q, const CorrSet& corr) {
  const ConditionedCorr cc(corr);
  const Conic normalized = conic_from_4corr_normalized(cc.image1().point_to_normalized(e.coords()), q, cc);
  return cc.image2().conic_to_pixel(normalized);
}

double residual_rms(const Vec3& e, const Vec3& e_prime, const ConditionedCorr& cc) {
  const auto quads = all_quads(cc.size());
  if (quads.empty()) return 0.0;
  const Vec3 eu = e.normalized();
  const Vec3 epu = e_prime.normalized();
  double sum = 0.0;
  for (const auto& q : quads) {
    const double r = quad_residual(eu, epu, q, cc);
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(quads.size()));
}

double residual_rms(const HomPoint2& e, const HomPoint2& e_prime, const CorrSet& corr) {
  const ConditionedCorr cc(corr);
  return residual_rms(cc.image1().point_to_normalized(e.coords()), cc.image2().point_to_normalized(e_prime.coords()),
                      cc);
}

double residual_rms_pixel(const HomPoint2& e, const HomPoint2& e_prime, const CorrSet& corr) {
  const auto to_pixel_scale = [](const HomPoint2& p) {
    return p.is_finite() ? Vec3(p.x() / p.z(), p.y() / p.z(), 1.0) : p.coords().normalized();
  };
  const Vec3 e_px = to_pixel_scale(e);
  const Vec3 ep_px = to_pixel_scale(e_prime);
  const auto quads = all_quads(corr.size());
  if (quads.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& q : quads) {
    const auto [i, j, k, l] = q.indices();
    const auto p = [&](std::size_t s) { return to_pixel_scale(corr[s].p); };
    const auto pp = [&](std::size_t s) { return to_pixel_scale(corr[s].p_prime); };
    const double r = det3(e_px, p(i), p(j)) * det3(e_px, p(k), p(l)) * det3(ep_px, pp(i), pp(k)) *
                         det3(ep_px, pp(j), pp(l)) -
                     det3(ep_px, pp(i), pp(j)) * det3(ep_px, pp(k), pp(l)) * det3(e_px, p(i), p(k)) *
                         det3(e_px, p(j), p(l));
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(quads.size()));
}

}  // namespace epiloc
