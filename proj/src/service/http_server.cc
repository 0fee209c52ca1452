// Copyright 2026 The imtkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "httplib.h"

#include "imt/service/service.h"

namespace imt::service {
namespace {

std::string Dump(const nlohmann::json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void JsonError(httplib::Response& res, int code, const std::string& message) {
  res.status = code;
  res.set_content(Dump({{"code", code}, {"message", message}}), "application/json");
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(const Service& s) : service(s) {
    const std::string path(kApiPath);
    server.Post(path, [this](const httplib::Request& req, httplib::Response& res) {
      const ApiResponse r = service.HandleBody(req.body);
      res.status = r.status;
      res.set_content(Dump(r.body), "application/json");
    });
    auto not_allowed = [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Allow", "POST");
      JsonError(res, 405, "method not allowed; use POST");
    };
    server.Get(path, not_allowed);
    server.Put(path, not_allowed);
    server.Patch(path, not_allowed);
    server.Delete(path, not_allowed);
    server.Options(path, not_allowed);
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) JsonError(res, res.status, httplib::status_message(res.status));
    });
  }

  const Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

int HttpServer::BindToAnyPort(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::Bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
bool HttpServer::ListenAfterBind() { return impl_->server.listen_after_bind(); }
void HttpServer::Stop() { impl_->server.stop(); }

}  // namespace imt::service
