// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epiloc/bench.hpp"
#include "epiloc/fundamental.hpp"
#include "epiloc/scene.hpp"
#include "epiloc/solvers.hpp"
#include "oracles/pencil_oracle.hpp"
#include "test_support.hpp"

using namespace epiloc;
using testing_support::rel_err;
using testing_support::rel_err1;
using testing_support::rel_err2;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Even k facing, odd k lateral, so every criterion sees both epipole regimes.
Scene scene_for(std::size_t k) {
  const std::uint64_t seed = 1000 + k;
  return generate_scene(k % 2 == 0 ? SceneConfig::facing(seed) : SceneConfig::lateral(seed));
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome cross_ratio_law() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t k = 0; k < 500; ++k) {
    const Scene s = scene_for(k);
    const ConditionedCorr cc(s.corr);
    const Vec3 e = cc.image1().point_to_normalized(s.e_true.coords()).normalized();
    const Vec3 ep = cc.image2().point_to_normalized(s.e_prime_true.coords()).normalized();
    const auto p = [&](std::size_t i) { return cc.p(i).normalized(); };
    const auto q = [&](std::size_t i) { return cc.p_prime(i).normalized(); };
    for (const auto& quad : all_quads(s.corr.size())) {
      for (const auto& o : inequivalent_orderings(quad)) {
        const auto [i, j, m, l] = o.indices();
        const double lhs = det3(e, p(i), p(j)) * det3(e, p(m), p(l)) * det3(ep, q(i), q(m)) * det3(ep, q(j), q(l));
        const double rhs = det3(ep, q(i), q(j)) * det3(ep, q(m), q(l)) * det3(e, p(i), p(m)) * det3(e, p(j), p(l));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
        ++checked;
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-9 && elapsed < 10.0,
          fmt("%zu orderings, worst relative %.2e, %.2f s", checked, worst, elapsed)};
}

Outcome four_point_conic() {
  double worst_e = 0.0, worst_p = 0.0;
  for (std::size_t k = 0; k < 500; ++k) {
    const Scene s = scene_for(k);
    const CorrSet corr = s.first(4);
    const ConditionedCorr cc(corr);
    const FourPointResult r = solve_four(s.e_true, corr);
    worst_e = std::max(worst_e, std::abs(r.conic_normalized.evaluate(
                                    cc.image2().point_to_normalized(s.e_prime_true.coords()).normalized())));
    for (std::size_t i = 0; i < 4; ++i) {
      worst_p = std::max(worst_p, std::abs(r.conic_normalized.evaluate(cc.p_prime(i).normalized())));
    }
  }
  return {worst_e < 1e-9 && worst_p < 1e-12,
          fmt("500 scenes, worst e' incidence %.2e, worst p' incidence %.2e", worst_e, worst_p)};
}

// The fourth common point of the two split conics by the pencil oracle, or
// nullopt when the oracle does not see exactly one point off the shared three.
std::optional<Vec3> oracle_fourth_point(const detail::CremonaOutcome& out, const ConditionedCorr& cc) {
  const auto pts = oracle::conic_intersections(out.conic_first.matrix(), out.conic_second.matrix());
  std::vector<Vec3> others;
  for (const auto& p : pts) {
    const bool shared = std::any_of(out.split.shared.begin(), out.split.shared.end(),
                                    [&](std::size_t i) { return rel_err(p, cc.p_prime(i)) < 1e-6; });
    if (!shared) others.push_back(p);
  }
  if (others.size() != 1) return std::nullopt;
  return others.front();
}

Outcome five_point_solver() {
  std::size_t accurate = 0, flagged = 0, silent = 0, compared = 0, oracle_bad = 0;
  double worst_oracle = 0.0;
  constexpr std::array<std::size_t, 5> idx{0, 1, 2, 3, 4};
  for (std::size_t k = 0; k < 500; ++k) {
    const Scene s = scene_for(k);
    const CorrSet corr = s.first(5);
    try {
      const EpipoleEstimate est = solve_five(s.e_true, corr);
      if (rel_err2(est.e_prime, s.e_prime_true, corr) < 1e-6) {
        ++accurate;
      } else {
        ++silent;
      }
    } catch (const GeometryError&) {
      ++flagged;
      continue;
    }
    const ConditionedCorr cc(corr);
    const auto out = detail::cremona_fourth_point(cc.image1().point_to_normalized(s.e_true.coords()), cc, idx);
    ++compared;
    const auto fourth = oracle_fourth_point(out, cc);
    if (!fourth) {
      ++oracle_bad;
      continue;
    }
    worst_oracle = std::max(worst_oracle, rel_err(*fourth, out.e_prime));
  }
  const bool pass = accurate >= 495 && silent == 0 && oracle_bad == 0 && worst_oracle < 1e-8;
  return {pass, fmt("%zu/500 within 1e-6, %zu flagged, %zu silent; oracle on %zu: worst %.2e, %zu unmatched", accurate,
                    flagged, silent, compared, worst_oracle, oracle_bad)};
}

Outcome six_point_solver() {
  std::size_t matched = 0, max_roots = 0, errors = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    const Scene s = scene_for(k);
    const CorrSet corr = s.first(6);
    Vec2 centroid = Vec2::Zero();
    for (std::size_t i = 0; i < 6; ++i) centroid += corr[i].p.pixel() / 6.0;
    const LineParam lp = LineParam::from_line(join(s.e_true, s.corr[6].p), centroid);
    try {
      const auto roots = solve_six(lp, corr);
      max_roots = std::max(max_roots, roots.size());
      const bool hit = std::any_of(roots.begin(), roots.end(), [&](const SixPointRoot& r) {
        return rel_err1(r.e, s.e_true, corr) < 1e-5 && rel_err2(r.e_prime, s.e_prime_true, corr) < 1e-5;
      });
      if (hit) ++matched;
    } catch (const GeometryError&) {
      ++errors;
    }
  }
  return {matched >= 190 && max_roots <= 3,
          fmt("%zu/200 with a matching root, %zu errors, at most %zu roots", matched, errors, max_roots)};
}

Outcome f_recovery() {
  double worst_sym = 0.0, worst_closure = 0.0, worst_frob = 0.0;
  std::size_t failures = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    const Scene s = scene_for(k);
    const CorrSet corr = s.first(5);
    try {
      const FundMatrix f = f_from_epipoles_and_corr(s.e_true, solve_five(s.e_true, corr).e_prime, corr);
      for (std::size_t i = 5; i < s.corr.size(); ++i) {
        worst_sym = std::max(worst_sym, sym_epipolar_distance(f, s.corr[i]));
      }
      for (const auto& q : all_quads(s.corr.size())) {
        const auto [i, j, m, l] = q.indices();
        const auto through_e = [&](std::size_t a) { return join(s.e_true, s.corr[a].p); };
        const auto transferred = [&](std::size_t a) { return epipolar_transfer(f, s.corr[a].p); };
        const double first = cross_ratio_lines(through_e(i), through_e(j), through_e(m), through_e(l));
        const double second = cross_ratio_lines(transferred(i), transferred(j), transferred(m), transferred(l));
        worst_closure = std::max(worst_closure, std::abs(second - first) / std::max(1.0, std::abs(first)));
      }
      const FundMatrix f8 = eight_point(s.corr);
      worst_frob = std::max(worst_frob, (f8.matrix() - f.matrix()).norm());
    } catch (const GeometryError&) {
      ++failures;
    }
  }
  return {failures == 0 && worst_sym < 1e-6 && worst_closure < 1e-9 && worst_frob < 1e-6,
          fmt("200 scenes, %zu errors, held-out sym distance %.2e px, closure %.2e, 8-point Frobenius %.2e", failures,
              worst_sym, worst_closure, worst_frob)};
}

// Two-sided Mann-Whitney U p-value, normal approximation with tie correction.
double mann_whitney_p(const std::vector<double>& a, const std::vector<double>& b) {
  struct Item {
    double v;
    int group;
  };
  std::vector<Item> all;
  for (double v : a) all.push_back({v, 0});
  for (double v : b) all.push_back({v, 1});
  std::sort(all.begin(), all.end(), [](const Item& x, const Item& y) { return x.v < y.v; });
  const double n1 = double(a.size()), n2 = double(b.size()), n = n1 + n2;
  double rank_sum = 0.0, tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    const double avg_rank = 0.5 * double(i + 1 + j);
    const double t = double(j - i);
    tie_term += t * t * t - t;
    for (std::size_t m = i; m < j; ++m)
      if (all[m].group == 0) rank_sum += avg_rank;
    i = j;
  }
  const double u = rank_sum - n1 * (n1 + 1.0) / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double z = (u - n1 * n2 / 2.0) / std::sqrt(var);
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

Outcome noise_bench() {
  const auto start = Clock::now();
  BenchConfig config;
  config.method = BenchMethod::solve5;
  config.sigmas = {0.0, 0.5, 1.0, 2.0};
  config.trials = 500;
  const auto rows = bench_noise(config);
  const double elapsed = seconds_since(start);

  bool monotone = true;
  int inversions = 0;
  std::string medians;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    medians += fmt("%s%.3g", i ? "/" : "", rows[i].median_px);
    if (i == 0 || rows[i].median_px >= rows[i - 1].median_px) continue;
    ++inversions;
    if (mann_whitney_p(rows[i - 1].errors, rows[i].errors) <= 0.05) monotone = false;
  }
  monotone = monotone && inversions <= 1;
  const bool pass = rows.size() == 4 && rows[0].fail_rate == 0.0 && rows[0].median_px < 1e-4 && monotone &&
                    elapsed < 120.0;
  return {pass, fmt("sigma 0 fail_rate %.3g median %.2e px; medians %s px; %d inversions; %.1f s", rows[0].fail_rate,
                    rows[0].median_px, medians.c_str(), inversions, elapsed)};
}

Outcome contract_suite() {
  const std::string cmd = std::string("\"") + EPILOC_PYTHON + "\" \"" + EPILOC_CONTRACT_SCRIPT + "\" --cli \"" +
                          EPILOC_CLI + "\" --schemas \"" + EPILOC_SCHEMA_DIR + "\" --fixtures \"" +
                          EPILOC_FIXTURE_DIR + "\" --workdir \"" + EPILOC_WORK_DIR + "\"";
  const int status = std::system(cmd.c_str());
  return {status == 0, fmt("contract checker exit status %d", status)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"cross-ratio law at the true epipoles", cross_ratio_law},
      {"4-point locus conic incidences", four_point_conic},
      {"5-point solver accuracy and oracle agreement", five_point_solver},
      {"6-point solver on the true epipolar line", six_point_solver},
      {"fundamental matrix recovery", f_recovery},
      {"noise bench for solve5", noise_bench},
      {"CLI/HTTP parity and JSON-schema validity", contract_suite},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  %s (%s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
