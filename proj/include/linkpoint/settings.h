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

#ifndef LINKPOINT_SETTINGS_H_
#define LINKPOINT_SETTINGS_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace linkpoint {

class SettingsError : public std::runtime_error {
 public:
  SettingsError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Global Settings: thresholds, sample sizes, seed and output locations.
struct GlobalSettings {
  double theta_id = 0.99;
  double theta_str = 0.5;
  double theta_rec = 0.1;
  double theta_err = 0.80;
  int n_p = 25;
  int n_r = 75;
  int max_depth = 3;
  double min_valid_fraction = 0.2;
  double bpm_support_fraction = 0.5;
  uint64_t seed = 42;
  std::string alignment_path = "alignment.json";
  std::string report_path = "report.json";
  std::string identifier_comparator = "normalized-exact";
  int identifier_min_occurrences = 10;
  int error_body_prefix = 2000;
  int workers = 4;

  bool operator==(const GlobalSettings&) const = default;
};

// Missing keys keep their defaults; unknown keys, wrong types and
// out-of-range values throw SettingsError naming the key.
GlobalSettings ParseSettings(const nlohmann::json& doc);
GlobalSettings LoadSettings(const std::filesystem::path& path);
nlohmann::json SettingsToJson(const GlobalSettings& settings);

}  // namespace linkpoint

#endif  // LINKPOINT_SETTINGS_H_
