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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "imt/core/error.h"
#include "imt/service/service.h"

namespace imt::service {
namespace {

using nlohmann::json;

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: bad value for \"") + key + "\": " + e.what());
  }
}

std::size_t ParseCount(const std::string& name, const std::string& value) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != value.size()) throw InvalidArgument(name + ": not a non-negative integer: " + value);
  return static_cast<std::size_t>(v);
}

}  // namespace

ServiceConfig ServiceConfig::FromJson(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");
  static const char* const kKeys[] = {
      "host",     "port",      "model",       "tm",          "terms",
      "initials", "src_lang",  "tgt_lang",    "lambda",      "beam_fast",
      "beam_normal", "beam_slow", "max_len",  "default_word_limit", "max_limit",
      "users"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw InvalidArgument("config: unknown key \"" + key + "\"");
  }
  ServiceConfig c;
  Read(j, "host", c.host);
  Read(j, "port", c.port);
  Read(j, "model", c.model_path);
  Read(j, "tm", c.tm_path);
  Read(j, "terms", c.terms_path);
  Read(j, "initials", c.initials_path);
  Read(j, "src_lang", c.src_lang);
  Read(j, "tgt_lang", c.tgt_lang);
  Read(j, "lambda", c.lambda);
  Read(j, "beam_fast", c.beam_fast);
  Read(j, "beam_normal", c.beam_normal);
  Read(j, "beam_slow", c.beam_slow);
  Read(j, "max_len", c.max_len);
  Read(j, "default_word_limit", c.default_word_limit);
  Read(j, "max_limit", c.max_limit);
  if (j.contains("users")) {
    const json& users = j.at("users");
    if (!users.is_array()) throw InvalidArgument("config: \"users\" must be an array");
    for (const json& u : users) {
      Credential cred;
      Read(u, "user_name", cred.user_name);
      Read(u, "token", cred.token);
      if (cred.user_name.empty() || cred.token.empty()) {
        throw InvalidArgument("config: users need user_name and token");
      }
      c.users.push_back(std::move(cred));
    }
  }
  if (c.beam_fast == 0 || c.beam_normal == 0 || c.beam_slow == 0) {
    throw InvalidArgument("config: beam sizes must be positive");
  }
  return c;
}

ServiceConfig ServiceConfig::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError("config: " + std::string(e.what()), e.byte);
  }
  return FromJson(j);
}

void ServiceConfig::ApplyEnv(const EnvLookup& lookup) {
  if (auto v = lookup("IMT_HOST")) host = *v;
  if (auto v = lookup("IMT_PORT")) port = static_cast<int>(ParseCount("IMT_PORT", *v));
  if (auto v = lookup("IMT_MODEL")) model_path = *v;
  if (auto v = lookup("IMT_TM")) tm_path = *v;
  if (auto v = lookup("IMT_TERMS")) terms_path = *v;
  if (auto v = lookup("IMT_LAMBDA")) {
    std::size_t pos = 0;
    try {
      lambda = std::stod(*v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != v->size()) throw InvalidArgument("IMT_LAMBDA: not a number: " + *v);
  }
  if (auto v = lookup("IMT_BEAM_FAST")) beam_fast = ParseCount("IMT_BEAM_FAST", *v);
  if (auto v = lookup("IMT_BEAM_NORMAL")) beam_normal = ParseCount("IMT_BEAM_NORMAL", *v);
  if (auto v = lookup("IMT_BEAM_SLOW")) beam_slow = ParseCount("IMT_BEAM_SLOW", *v);
  if (beam_fast == 0 || beam_normal == 0 || beam_slow == 0) {
    throw InvalidArgument("beam sizes must be positive");
  }
}

void ServiceConfig::ApplyEnv() {
  ApplyEnv([](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  });
}

}  // namespace imt::service
