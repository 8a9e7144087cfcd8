#pragma once

// HTTP API over the most recently published snapshot. Request handling is a
// pure function of (snapshot, request) so it can be exercised without a
// socket; the server is a thin httplib adapter.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <json.hpp>

#include "privrisk/pipeline.hpp"

namespace httplib {
class Server;
}

namespace privrisk {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Routes:
///   GET  /api/health
///   GET  /api/summary
///   GET  /api/users/{id}/report
///   GET  /api/users/{id}/neighbors?depth=N
///   GET  /api/users/{id}/content
///   POST /api/users/{id}/whatif
ApiResponse handle_request(const Snapshot* snapshot, std::string_view method, std::string_view path,
                           const std::map<std::string, std::string>& query, std::string_view body);

class Service {
public:
  Service();
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Atomically replaces the served snapshot. Refuses an empty population.
  void publish(std::shared_ptr<const Snapshot> snapshot);
  std::shared_ptr<const Snapshot> current() const;

  ApiResponse handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query, std::string_view body) const;

  /// Serves files under `dir` at "/" (for the dashboard build).
  void mount_static(const std::filesystem::path& dir);

  /// Binds and serves on a background thread; returns the bound port (an
  /// ephemeral one when `port` is 0). Throws when binding fails.
  int start(const std::string& host, int port);
  /// Blocks serving on the calling thread.
  void run(const std::string& host, int port);
  void stop();

private:
  void install_routes();

  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace privrisk
