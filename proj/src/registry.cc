// Copyright 2026 The Linkpoint Authors.
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

#include "linkpoint/registry.h"

#include <fstream>
#include <set>

#include "linkpoint/harness.h"

namespace linkpoint {

namespace {

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void RejectUnknownKeys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T Field(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

Registry Registry::FromJson(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("registry must be a JSON object");
  RejectUnknownKeys(j, {"kbs", "apis"}, "registry");
  Registry reg;
  const nlohmann::json kbs = j.value("kbs", nlohmann::json::object());
  const nlohmann::json apis = j.value("apis", nlohmann::json::object());
  if (!kbs.is_object() || !apis.is_object()) {
    throw ConfigError("registry: 'kbs' and 'apis' must be objects");
  }
  for (const auto& [name, kb] : kbs.items()) {
    const std::string where = "kbs." + name;
    if (!kb.is_object()) throw ConfigError(where + " must be an object");
    RejectUnknownKeys(kb, {"path", "type_predicate"}, where);
    if (!kb.contains("path")) throw ConfigError(where + ": missing 'path'");
    KbRegistration r;
    r.name = name;
    r.path = Resolve(base_dir, Field<std::string>(kb, "path", "", where));
    r.type_predicate = Field<std::string>(kb, "type_predicate", "", where);
    reg.kbs_.emplace(name, std::move(r));
  }
  for (const auto& [name, api] : apis.items()) {
    const std::string where = "apis." + name;
    if (!api.is_object()) throw ConfigError(where + " must be an object");
    RejectUnknownKeys(api,
                      {"url", "input_class", "rate_limit_ms", "timeout_ms", "max_retries",
                       "retry_backoff_ms", "headers", "replay_dir"},
                      where);
    if (!api.contains("url")) throw ConfigError(where + ": missing 'url'");
    if (!api.contains("input_class")) throw ConfigError(where + ": missing 'input_class'");
    ApiRegistration r;
    ApiEndpoint& e = r.endpoint;
    e.name = name;
    e.url_template = Field<std::string>(api, "url", "", where);
    e.input_class = Field<std::string>(api, "input_class", "", where);
    e.rate_limit = std::chrono::milliseconds(Field<int64_t>(api, "rate_limit_ms", 0, where));
    e.timeout = std::chrono::milliseconds(Field<int64_t>(api, "timeout_ms", 10000, where));
    e.max_retries = Field<int>(api, "max_retries", 3, where);
    e.retry_backoff =
        std::chrono::milliseconds(Field<int64_t>(api, "retry_backoff_ms", 200, where));
    if (api.contains("headers")) {
      if (!api["headers"].is_object()) throw ConfigError(where + ".headers must be an object");
      for (const auto& [k, v] : api["headers"].items()) {
        if (!v.is_string()) throw ConfigError(where + ".headers." + k + " must be a string");
        e.headers.emplace_back(k, v.get<std::string>());
      }
    }
    if (api.contains("replay_dir")) {
      r.replay_dir = Resolve(base_dir, Field<std::string>(api, "replay_dir", "", where));
    }
    e.Validate();
    reg.apis_.emplace(name, std::move(r));
  }
  return reg;
}

Registry Registry::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open registry " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("registry " + path.string() + ": " + e.what());
  }
  return FromJson(j, path.parent_path());
}

const KbRegistration& Registry::Kb(const std::string& name) const {
  auto it = kbs_.find(name);
  if (it == kbs_.end()) throw ConfigError("no KB registered as '" + name + "'");
  return it->second;
}

const ApiRegistration& Registry::Api(const std::string& name) const {
  auto it = apis_.find(name);
  if (it == apis_.end()) throw ConfigError("no API registered as '" + name + "'");
  return it->second;
}

std::shared_ptr<Transport> MakeTransport(const ApiRegistration& api) {
  if (!api.replay_dir) return std::make_shared<HttpTransport>();
  auto replay = LoadReplayApi(*api.replay_dir);
  // Fixtures are keyed by value; requests follow the registered template.
  auto copy = std::make_shared<MockApi>(*replay);
  copy->url_template = api.endpoint.url_template;
  return std::make_shared<MockTransport>(std::move(copy));
}

}  // namespace linkpoint
