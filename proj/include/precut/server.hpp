#pragma once

// Read-only HTTP API over a rendered store. Api holds everything in memory
// and answers requests without touching shared mutable state.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace precut::server {

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

using Query = std::map<std::string, std::string>;

struct ApiOptions {
  double hit_radius_px = 12.0;
  int default_page_size = 25;
  int max_page_size = 1000;
};

class Api {
 public:
  // Opens and verifies the store. Throws Error on a bad store.
  explicit Api(const std::filesystem::path& store, ApiOptions options = {});
  ~Api();
  Api(Api&&) noexcept;

  // `path` is percent-decoded already.
  Response get(std::string_view path, const Query& query = {}) const;

 private:
  struct Data;
  std::unique_ptr<Data> data_;
  ApiOptions options_;
};

std::string percent_decode(std::string_view s);

struct ServeOptions {
  std::string bind = "127.0.0.1";
  int port = 8080;
};

// Blocks until the process is stopped.
void serve(const Api& api, const ServeOptions& options);

// Background server for tests. Port 0 picks a free port.
class BackgroundServer {
 public:
  BackgroundServer(const Api& api, const std::string& bind, int port = 0);
  ~BackgroundServer();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace precut::server
