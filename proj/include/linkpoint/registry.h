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

#ifndef LINKPOINT_REGISTRY_H_
#define LINKPOINT_REGISTRY_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "linkpoint/api_connector.h"

namespace linkpoint {

struct KbRegistration {
  std::string name;
  std::filesystem::path path;
  std::string type_predicate;  // empty means rdf:type
};

struct ApiRegistration {
  ApiEndpoint endpoint;
  // Serve recorded fixtures from this directory instead of the network.
  std::optional<std::filesystem::path> replay_dir;
};

// Named KBs and APIs, as stored in registry.json:
//   {"kbs": {name: {path, type_predicate?}},
//    "apis": {name: {url, input_class, rate_limit_ms?, timeout_ms?,
//                    max_retries?, headers?, replay_dir?}}}
// Relative paths resolve against the registry file's directory.
class Registry {
 public:
  static Registry FromJson(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static Registry Load(const std::filesystem::path& path);

  // Both throw ConfigError naming the missing entry.
  const KbRegistration& Kb(const std::string& name) const;
  const ApiRegistration& Api(const std::string& name) const;

  const std::map<std::string, KbRegistration>& kbs() const { return kbs_; }
  const std::map<std::string, ApiRegistration>& apis() const { return apis_; }

 private:
  std::map<std::string, KbRegistration> kbs_;
  std::map<std::string, ApiRegistration> apis_;
};

// HttpTransport, or a replay transport when replay_dir is set.
std::shared_ptr<Transport> MakeTransport(const ApiRegistration& api);

}  // namespace linkpoint

#endif  // LINKPOINT_REGISTRY_H_
