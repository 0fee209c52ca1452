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

#ifndef IMT_SERVICE_SERVICE_H_
#define IMT_SERVICE_SERVICE_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "imt/core/vocab_trie.h"
#include "imt/model/reference_model.h"
#include "imt/tm/terms.h"
#include "imt/tm/tm_index.h"

namespace imt::service {

inline constexpr std::string_view kApiPath = "/api/imt";

struct Credential {
  std::string user_name;
  std::string token;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string model_path;
  std::string tm_path;       // saved index or "src<TAB>tgt" file; optional
  std::string terms_path;    // "src<TAB>tgt" file; optional
  std::string initials_path;  // typed-key initials table; prefix keys when empty
  std::string src_lang;
  std::string tgt_lang;
  double lambda = 0.7;
  std::size_t beam_fast = 1;
  std::size_t beam_normal = 4;
  std::size_t beam_slow = 12;
  std::size_t max_len = 0;
  std::size_t default_word_limit = 10;
  std::size_t max_limit = 100;
  // Empty registry: every caller is accepted.
  std::vector<Credential> users;

  // Unknown keys are rejected. Throws ParseError / InvalidArgument.
  static ServiceConfig FromJson(const nlohmann::json& j);
  static ServiceConfig LoadFile(const std::string& path);

  // IMT_PORT, IMT_HOST, IMT_MODEL, IMT_TM, IMT_TERMS, IMT_LAMBDA,
  // IMT_BEAM_FAST, IMT_BEAM_NORMAL, IMT_BEAM_SLOW.
  using EnvLookup = std::function<std::optional<std::string>(const char*)>;
  void ApplyEnv(const EnvLookup& lookup);
  void ApplyEnv();
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Stateless request handler over immutable shared model and stores; safe to
// call concurrently.
class Service {
 public:
  Service(ServiceConfig config, std::shared_ptr<const model::ReferenceModel> model,
          std::shared_ptr<const tm::TmIndex> tm = nullptr,
          std::shared_ptr<const tm::TermStore> terms = nullptr);

  // Loads the model and stores named in the config.
  static Service FromConfig(const ServiceConfig& config);

  // Dispatches on header.fn. Errors come back as {code, message} with the
  // HTTP status equal to code: 400 malformed request, 401 unknown
  // credentials, 404 unknown function, 422 infeasible constraints.
  ApiResponse Handle(const nlohmann::json& request) const;
  ApiResponse HandleBody(std::string_view body) const;

  const ServiceConfig& config() const { return config_; }

 private:
  struct Request;

  nlohmann::json DynamicSuggestion(const Request& req) const;
  nlohmann::json AutoTranslation(const Request& req) const;
  nlohmann::json StaticSuggestion(const Request& req) const;
  nlohmann::json SelectionSuggestion(const Request& req) const;

  ServiceConfig config_;
  std::shared_ptr<const model::ReferenceModel> model_;
  std::shared_ptr<const tm::TmIndex> tm_;
  std::shared_ptr<const tm::TermStore> terms_;
  model::ReferenceScorer scorer_;
  VocabTrie trie_;
};

// HTTP front end: POST kApiPath only; other methods get 405.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port, or -1 on failure.
  int BindToAnyPort(const std::string& host);
  bool Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace imt::service

#endif  // IMT_SERVICE_SERVICE_H_
