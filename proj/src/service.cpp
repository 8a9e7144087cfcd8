#include "privrisk/service.hpp"

#include <charconv>

#include <httplib.h>

#include "privrisk/export.hpp"

namespace privrisk {

using nlohmann::json;

namespace {

ApiResponse error(int status, std::string message) {
  return {status, json{{"error", std::move(message)}}};
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    const auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<SettingChange> parse_changes(const json& body) {
  if (!body.is_object() || !body.contains("changes") || !body["changes"].is_array())
    throw DataError("body must be an object with a 'changes' array");
  std::vector<SettingChange> changes;
  for (const auto& c : body["changes"]) {
    if (!c.is_object()) throw DataError("each change must be an object");
    SettingChange change;
    if (c.contains("attribute")) {
      change.target = SettingChange::Target::Attribute;
      change.item = c.at("attribute").get<std::string>();
      change.setting = parse_privacy_level(c.at("setting").get<std::string>());
    } else if (c.contains("post")) {
      change.target = SettingChange::Target::Post;
      change.item = c["post"].is_string() ? c["post"].get<std::string>()
                                          : std::to_string(c["post"].get<std::int64_t>());
      change.setting = parse_privacy_level(c.at("visibility").get<std::string>());
    } else {
      throw DataError("change needs 'attribute' or 'post'");
    }
    changes.push_back(std::move(change));
  }
  return changes;
}

}  // namespace

ApiResponse handle_request(const Snapshot* s, std::string_view method, std::string_view path,
                           const std::map<std::string, std::string>& query, std::string_view body) {
  const auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api") return error(404, "no such route");

  if (parts.size() == 2 && parts[1] == "health") {
    if (method != "GET") return error(405, "method not allowed");
    json j{{"status", s ? "ok" : "loading"}};
    if (s) {
      j["users"] = s->dataset->graph.node_count();
      j["posts"] = s->dataset->posts.size();
      j["fingerprint"] = std::to_string(s->fingerprint);
    }
    return {200, j};
  }
  if (parts.size() == 2 && parts[1] == "summary") {
    if (method != "GET") return error(405, "method not allowed");
    if (!s) return error(503, "no snapshot published");
    return {200, to_json(s->summary, s->scenario_rows)};
  }
  if (parts.size() != 4 || parts[1] != "users") return error(404, "no such route");

  const auto user = parse_uint(parts[2]);
  if (!user) return error(400, "user id must be a non-negative integer");
  const auto action = parts[3];
  const bool is_post = action == "whatif";
  if (action != "report" && action != "neighbors" && action != "content" && !is_post)
    return error(404, "no such route");
  if (method != (is_post ? "POST" : "GET")) return error(405, "method not allowed");
  if (!s) return error(503, "no snapshot published");
  if (!s->dataset->graph.contains(*user)) return error(404, "unknown user " + std::string(parts[2]));

  try {
    if (action == "report") return {200, to_json(*s->report(*user))};
    if (action == "content") return {200, content_json(*s, *user)};
    if (action == "neighbors") {
      int depth = 1;
      if (auto it = query.find("depth"); it != query.end()) {
        const auto d = parse_uint(it->second);
        if (!d || *d > 3) return error(400, "depth must be an integer in [0, 3]");
        depth = static_cast<int>(*d);
      }
      auto j = to_json(neighbor_subgraph(*s, *user, depth, s->config.neighbor_limit));
      j["user"] = *user;
      j["depth"] = depth;
      return {200, j};
    }
    json request;
    try {
      request = json::parse(body);
    } catch (const json::parse_error& e) {
      return error(400, std::string("malformed JSON: ") + e.what());
    }
    std::vector<SettingChange> changes;
    bool recompute = true;
    try {
      changes = parse_changes(request);
      if (request.contains("recompute_struct")) recompute = request["recompute_struct"].get<bool>();
    } catch (const json::exception& e) {
      return error(400, std::string("malformed change: ") + e.what());
    } catch (const DataError& e) {
      return error(400, e.what());
    }
    return {200, to_json(what_if(*s, *user, changes, recompute))};
  } catch (const NotFoundError& e) {
    return error(404, e.what());
  } catch (const PreconditionError& e) {
    return error(400, e.what());
  }
}

Service::Service() : server_(std::make_unique<httplib::Server>()) { install_routes(); }

Service::~Service() { stop(); }

void Service::publish(std::shared_ptr<const Snapshot> snapshot) {
  if (!snapshot || !snapshot->dataset || snapshot->dataset->graph.node_count() == 0)
    throw PreconditionError("refusing to publish an empty population");
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snapshot);
}

std::shared_ptr<const Snapshot> Service::current() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

ApiResponse Service::handle(std::string_view method, std::string_view path,
                            const std::map<std::string, std::string>& query,
                            std::string_view body) const {
  const auto snapshot = current();   // pinned for the whole request
  return handle_request(snapshot.get(), method, path, query, body);
}

void Service::install_routes() {
  const auto adapter = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const auto r = handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server_->Get(R"(/api/.*)", adapter);
  server_->Post(R"(/api/.*)", adapter);
}

void Service::mount_static(const std::filesystem::path& dir) {
  if (!server_->set_mount_point("/", dir.string()))
    throw std::filesystem::filesystem_error("cannot mount static directory", dir,
                                            std::make_error_code(std::errc::no_such_file_or_directory));
}

int Service::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Service::run(const std::string& host, int port) {
  if (!server_->listen(host, port))
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace privrisk
