#include "epiloc/service.hpp"

#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "epiloc/api.hpp"

// After Eigen: resolv.h, pulled in by httplib, defines a _res macro.
#include <httplib.h>

namespace epiloc {

namespace {

constexpr const char* kPlaceholder =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>epiloc</title></head>"
    "<body><p>epiloc service. POST /api/solve, POST /api/fmatrix, GET /api/health.</p></body></html>\n";

void reply(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(dump(r.body), "application/json");
}

}  // namespace

int default_port() {
  if (const char* env = std::getenv("EPILOC_PORT")) {
    try {
      const int port = std::stoi(env);
      if (port > 0 && port < 65536) return port;
    } catch (const std::exception&) {
    }
  }
  return 8080;
}

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto& srv = impl_->server;

  srv.Post("/api/solve", [](const httplib::Request& req, httplib::Response& res) {
    const bool fmatrix = req.has_param("fmatrix") && req.get_param_value("fmatrix") != "0";
    reply(res, handle_solve(req.body, fmatrix));
  });
  srv.Post("/api/fmatrix",
           [](const httplib::Request& req, httplib::Response& res) { reply(res, handle_fmatrix(req.body)); });
  srv.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(dump(json{{"status", "ok"}}), "application/json");
  });

  const std::string& dir = impl_->config.static_dir;
  if (!dir.empty()) {
    if (!std::filesystem::is_directory(dir) || !srv.set_mount_point("/", dir)) {
      throw std::invalid_argument("static directory '" + dir + "' is not readable");
    }
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kPlaceholder, "text/html"); });
  }
}

Service::~Service() { stop(); }

int Service::bind() {
  auto& srv = impl_->server;
  if (impl_->config.port == 0) return srv.bind_to_any_port(impl_->config.host);
  return srv.bind_to_port(impl_->config.host, impl_->config.port) ? impl_->config.port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

bool Service::listen() { return bind() > 0 && run(); }

void Service::stop() {
  if (impl_) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace epiloc
