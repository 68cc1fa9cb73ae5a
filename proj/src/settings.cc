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

#include "linkpoint/settings.h"

#include <fstream>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "linkpoint/similarity.h"

namespace linkpoint {

namespace {

double GetRatio(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw SettingsError(key, "expected a number");
  double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) throw SettingsError(key, fmt::format("{} is outside [0, 1]", d));
  return d;
}

int GetInt(const nlohmann::json& v, const std::string& key, int min_value) {
  if (!v.is_number_integer()) throw SettingsError(key, "expected an integer");
  auto i = v.get<int64_t>();
  if (i < min_value || i > 100000000) {
    throw SettingsError(key, fmt::format("{} must be >= {}", i, min_value));
  }
  return static_cast<int>(i);
}

std::string GetString(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw SettingsError(key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

GlobalSettings ParseSettings(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SettingsError("", "settings must be a JSON object");
  GlobalSettings s;
  using Setter = std::function<void(const nlohmann::json&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"theta_id", [&](auto& v, auto& k) {
         s.theta_id = GetRatio(v, k);
         if (s.theta_id == 0.0) throw SettingsError(k, "must be > 0");
       }},
      {"theta_str", [&](auto& v, auto& k) { s.theta_str = GetRatio(v, k); }},
      {"theta_rec", [&](auto& v, auto& k) { s.theta_rec = GetRatio(v, k); }},
      {"theta_err", [&](auto& v, auto& k) { s.theta_err = GetRatio(v, k); }},
      {"n_p", [&](auto& v, auto& k) { s.n_p = GetInt(v, k, 1); }},
      {"n_r", [&](auto& v, auto& k) { s.n_r = GetInt(v, k, 1); }},
      {"max_depth", [&](auto& v, auto& k) { s.max_depth = GetInt(v, k, 1); }},
      {"min_valid_fraction", [&](auto& v, auto& k) { s.min_valid_fraction = GetRatio(v, k); }},
      {"bpm_support_fraction", [&](auto& v, auto& k) { s.bpm_support_fraction = GetRatio(v, k); }},
      {"seed", [&](auto& v, auto& k) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.template get<int64_t>() >= 0)) {
           throw SettingsError(k, "expected a non-negative integer");
         }
         s.seed = v.template get<uint64_t>();
       }},
      {"alignment_path", [&](auto& v, auto& k) { s.alignment_path = GetString(v, k); }},
      {"report_path", [&](auto& v, auto& k) { s.report_path = GetString(v, k); }},
      {"identifier_comparator", [&](auto& v, auto& k) {
         s.identifier_comparator = GetString(v, k);
         auto names = IdentifierComparatorNames();
         if (std::find(names.begin(), names.end(), s.identifier_comparator) == names.end()) {
           throw SettingsError(k, "unknown comparator '" + s.identifier_comparator + "'");
         }
       }},
      {"identifier_min_occurrences",
       [&](auto& v, auto& k) { s.identifier_min_occurrences = GetInt(v, k, 0); }},
      {"error_body_prefix", [&](auto& v, auto& k) { s.error_body_prefix = GetInt(v, k, 1); }},
      {"workers", [&](auto& v, auto& k) { s.workers = GetInt(v, k, 1); }},
  };
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    auto setter = setters.find(it.key());
    if (setter == setters.end()) throw SettingsError(it.key(), "unknown settings key");
    setter->second(it.value(), it.key());
  }
  return s;
}

GlobalSettings LoadSettings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SettingsError("", "cannot open settings file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SettingsError("", fmt::format("{}: {}", path.string(), e.what()));
  }
  return ParseSettings(doc);
}

nlohmann::json SettingsToJson(const GlobalSettings& s) {
  return {
      {"theta_id", s.theta_id},
      {"theta_str", s.theta_str},
      {"theta_rec", s.theta_rec},
      {"theta_err", s.theta_err},
      {"n_p", s.n_p},
      {"n_r", s.n_r},
      {"max_depth", s.max_depth},
      {"min_valid_fraction", s.min_valid_fraction},
      {"bpm_support_fraction", s.bpm_support_fraction},
      {"seed", s.seed},
      {"alignment_path", s.alignment_path},
      {"report_path", s.report_path},
      {"identifier_comparator", s.identifier_comparator},
      {"identifier_min_occurrences", s.identifier_min_occurrences},
      {"error_body_prefix", s.error_body_prefix},
      {"workers", s.workers},
  };
}

}  // namespace linkpoint
