#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "epiloc/api.hpp"
#include "epiloc/bench.hpp"
#include "epiloc/service.hpp"

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitDegenerate = 3;

epiloc::Service* g_service = nullptr;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int emit(const epiloc::ApiResponse& r) {
  if (r.status == 200) {
    std::cout << epiloc::dump(r.body);
    return 0;
  }
  std::cerr << epiloc::dump(r.body);
  return r.status == 422 ? kExitDegenerate : kExitBadInput;
}

int run_request(const std::string& path, bool fmatrix_route, bool force_fmatrix) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << epiloc::dump(epiloc::request_error_json("cannot read '" + path + "'"));
    return kExitBadInput;
  }
  return emit(fmatrix_route ? epiloc::handle_fmatrix(text) : epiloc::handle_solve(text, force_fmatrix));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epipole localization from a known epipole (or epipolar line) and 4 to 6 correspondences"};
  app.require_subcommand(1);

  std::string solve_path;
  bool with_f = false;
  auto* solve = app.add_subcommand("solve", "Solve a problem file and print the result JSON");
  solve->add_option("path", solve_path, "Problem file (JSON)")->required();
  solve->add_flag("--fmatrix", with_f, "Also recover the fundamental matrix (5 or 6 pairs)");

  std::string fmatrix_path;
  auto* fmatrix = app.add_subcommand("fmatrix", "Fundamental matrix and epipolar lines from both epipoles");
  fmatrix->add_option("path", fmatrix_path, "Request file (JSON)")->required();

  std::string mode = "facing";
  std::size_t n_points = 12;
  std::uint64_t seed = 42;
  std::string out_path;
  std::size_t problem_n = 0;
  std::optional<double> position_jitter;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic two-view scene");
  simulate->add_option("--mode", mode, "Camera layout")->check(CLI::IsMember({"facing", "lateral"}));
  simulate->add_option("--n-points", n_points, "Number of 3D points")->check(CLI::Range(8, 10000));
  simulate->add_option("--seed", seed, "Scene seed");
  simulate->add_option("--position-jitter", position_jitter, "Half-width of the camera-2 position jitter")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--problem", problem_n, "Emit a problem file with this many correspondences instead")
      ->check(CLI::Range(4, 6));
  simulate->add_option("--out", out_path, "Output file (stdout if omitted)");

  std::string method = "solve5";
  std::vector<double> sigmas{0.0, 0.5, 1.0, 2.0};
  std::size_t trials = 100;
  std::uint64_t bench_seed = 1;
  std::string bench_mode = "facing";
  bool perturb = false;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Noise sweep, CSV output");
  bench->add_option("--method", method, "Solver")->check(CLI::IsMember({"solve4", "solve5", "solve6"}));
  bench->add_option("--sigmas", sigmas, "Noise levels in pixels")->delimiter(',')->check(CLI::NonNegativeNumber);
  bench->add_option("--trials", trials, "Scenes per sigma")->check(CLI::Range(1, 1000000));
  bench->add_option("--seed", bench_seed, "Base seed");
  bench->add_option("--mode", bench_mode, "Camera layout")->check(CLI::IsMember({"facing", "lateral"}));
  bench->add_flag("--perturb-epipole", perturb, "Add noise to the known epipole too");
  bench->add_option("--out", bench_out, "Output CSV (stdout if omitted)");

  epiloc::ServiceConfig service_config;
  service_config.port = epiloc::default_port();
  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON service");
  serve->add_option("--port", service_config.port, "Port (default from EPILOC_PORT, else 8080)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--host", service_config.host, "Bind address");
  serve->add_option("--static-dir", service_config.static_dir, "Directory served at /")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*solve) return run_request(solve_path, false, with_f);
    if (*fmatrix) return run_request(fmatrix_path, true, false);

    if (*simulate) {
      epiloc::SceneConfig config = mode == "facing" ? epiloc::SceneConfig::facing(seed, n_points)
                                                    : epiloc::SceneConfig::lateral(seed, n_points);
      if (position_jitter) config.position_jitter = *position_jitter;
      const epiloc::Scene scene = epiloc::generate_scene(config);
      const epiloc::json j = problem_n ? epiloc::to_json(epiloc::problem_from_scene(scene, problem_n))
                                       : epiloc::to_json(scene);
      if (!write_output(out_path, epiloc::dump(j))) {
        std::cerr << "cannot write '" << out_path << "'\n";
        return kExitBadInput;
      }
      return 0;
    }

    if (*bench) {
      epiloc::BenchConfig config;
      config.method = epiloc::parse_bench_method(method);
      config.sigmas = sigmas;
      config.trials = trials;
      config.seed = bench_seed;
      config.mode = bench_mode == "facing" ? epiloc::SceneMode::facing : epiloc::SceneMode::lateral;
      config.perturb_epipole = perturb;
      std::ostringstream csv;
      epiloc::write_bench_csv(csv, epiloc::bench_noise(config));
      if (!write_output(bench_out, csv.str())) {
        std::cerr << "cannot write '" << bench_out << "'\n";
        return kExitBadInput;
      }
      return 0;
    }

    if (*serve) {
      epiloc::Service service(service_config);
      const int port = service.bind();
      if (port <= 0) {
        std::cerr << "cannot bind " << service_config.host << ":" << service_config.port << "\n";
        return 1;
      }
      g_service = &service;
      std::signal(SIGINT, [](int) { if (g_service) g_service->stop(); });
      std::signal(SIGTERM, [](int) { if (g_service) g_service->stop(); });
      std::cerr << "listening on http://" << service_config.host << ":" << port << "\n";
      const bool ok = service.run();
      g_service = nullptr;
      return ok ? 0 : 1;
    }
  } catch (const epiloc::GeometryError& err) {
    std::cerr << epiloc::dump(epiloc::error_json(err));
    return kExitDegenerate;
  } catch (const epiloc::RequestError& err) {
    std::cerr << epiloc::dump(epiloc::request_error_json(err.what()));
    return kExitBadInput;
  } catch (const std::invalid_argument& err) {
    std::cerr << err.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}
