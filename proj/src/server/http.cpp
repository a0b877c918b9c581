#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "precut/error.hpp"
#include "precut/server.hpp"

namespace precut::server {

namespace {

void install(httplib::Server& svr, const Api& api) {
  svr.Get(".*", [&api](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    Response r;
    try {
      r = api.get(req.path, query);
    } catch (const std::exception& e) {
      spdlog::error("GET {}: {}", req.path, e.what());
      r.status = 500;
      r.body = R"({"error":{"status":500,"code":"internal","message":"internal error"}})";
    }
    res.status = r.status;
    for (const auto& [k, v] : r.headers) res.set_header(k, v);
    res.set_content(r.body, r.content_type);
  });
}

}  // namespace

void serve(const Api& api, const ServeOptions& options) {
  httplib::Server svr;
  install(svr, api);
  spdlog::info("listening on http://{}:{}", options.bind, options.port);
  if (!svr.listen(options.bind, options.port)) {
    throw Error("cannot listen on " + options.bind + ":" + std::to_string(options.port));
  }
}

struct BackgroundServer::Impl {
  httplib::Server svr;
  std::thread thread;
};

BackgroundServer::BackgroundServer(const Api& api, const std::string& bind, int port)
    : impl_(std::make_unique<Impl>()) {
  install(impl_->svr, api);
  if (port == 0) {
    port_ = impl_->svr.bind_to_any_port(bind);
  } else {
    port_ = impl_->svr.bind_to_port(bind, port) ? port : -1;
  }
  if (port_ <= 0) throw Error("cannot bind " + bind);
  impl_->thread = std::thread([this] { impl_->svr.listen_after_bind(); });
  impl_->svr.wait_until_ready();
}

BackgroundServer::~BackgroundServer() {
  impl_->svr.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace precut::server
