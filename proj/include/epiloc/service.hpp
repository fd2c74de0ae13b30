#pragma once

#include <memory>
#include <string>

namespace epiloc {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Directory served at /. Empty serves a small placeholder page.
  std::string static_dir;
};

/// Port from EPILOC_PORT, or 8080.
int default_port();

/// Stateless JSON service: POST /api/solve, POST /api/fmatrix, GET /api/health.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to config.port (0 picks a free port) and returns the bound port,
  /// or -1 on failure.
  int bind();
  /// Blocks until stop(). Call after bind().
  bool run();
  /// Bind and run.
  bool listen();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace epiloc
