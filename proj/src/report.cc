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

#include "linkpoint/report.h"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace linkpoint {

nlohmann::json KbPathToJson(const KbPath& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& hop : path) {
    arr.push_back({{"predicate", hop.predicate},
                   {"direction", std::string(DirectionName(hop.direction))}});
  }
  return arr;
}

KbPath KbPathFromJson(const nlohmann::json& j) {
  KbPath out;
  for (const auto& hop : j) {
    std::string dir = hop.value("direction", "forward");
    if (dir != "forward" && dir != "inverse") {
      throw std::invalid_argument("bad hop direction '" + dir + "'");
    }
    out.push_back({hop.at("predicate").get<std::string>(),
                   dir == "forward" ? Direction::kForward : Direction::kInverse});
  }
  return out;
}

nlohmann::json AlignmentToJson(const std::vector<AlignmentEntry>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({
        {"input_relation", e.input_relation},
        {"kb_path", KbPathToJson(e.kb_path)},
        {"api_path", e.api_path},
        {"kind", std::string(MatchKindName(e.kind))},
        {"method", std::string(MethodName(e.method))},
        {"confidence", e.confidence},
        {"support", {{"matches", e.matches}, {"valid_responses", e.valid_responses}}},
    });
  }
  return arr;
}

std::vector<AlignmentEntry> AlignmentFromJson(const nlohmann::json& j) {
  std::vector<AlignmentEntry> out;
  for (const auto& item : j) {
    AlignmentEntry e;
    e.input_relation = item.value("input_relation", "");
    e.kb_path = KbPathFromJson(item.at("kb_path"));
    e.api_path = item.at("api_path").get<std::string>();
    e.kind = item.value("kind", "FPM") == "BPM" ? MatchKind::kBranchingPoint
                                                : MatchKind::kFixedPath;
    if (item.contains("method")) {
      auto m = MethodFromName(item["method"].get<std::string>());
      if (!m) throw std::invalid_argument("unknown method " + item["method"].dump());
      e.method = *m;
    }
    e.confidence = item.value("confidence", 0.0);
    if (item.contains("support")) {
      e.matches = item["support"].value("matches", size_t{0});
      e.valid_responses = item["support"].value("valid_responses", size_t{0});
    }
    out.push_back(std::move(e));
  }
  return out;
}

nlohmann::json IdentifiersToJson(const IdentifierRelationSet& ids) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : ids.relations) {
    arr.push_back({{"predicate", r.predicate},
                   {"inverse_functionality", r.inverse_functionality.value()},
                   {"distinct_values", r.inverse_functionality.distinct},
                   {"triples", r.inverse_functionality.total}});
  }
  return arr;
}

nlohmann::json ProbeReportToJson(const ProbeReport& report) {
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& r : report.relations) {
    relations.push_back({
        {"relation", r.relation},
        {"accepted", r.accepted},
        {"requests_sent", r.requests_sent},
        {"valid_responses", r.valid_responses},
        {"error_responses", r.error_responses},
        {"http_failures", r.http_failures},
        {"error_signature", r.error_signature ? nlohmann::json(*r.error_signature) : nlohmann::json(nullptr)},
        {"warnings", r.warnings},
    });
  }
  return {
      {"valid_input_relations", report.valid_input_relations},
      {"error_signature",
       report.error_signature ? nlohmann::json(*report.error_signature) : nlohmann::json(nullptr)},
      {"relations", relations},
      {"warnings", report.warnings},
  };
}

nlohmann::json RunReportToJson(const AlignmentResult& result, const GlobalSettings& settings) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : result.inputs) {
    inputs.push_back({{"input_relation", in.input_relation},
                      {"requests_sent", in.n_sent},
                      {"valid_responses", in.n_valid},
                      {"match_triples", in.triple_count},
                      {"entries", in.entries.size()},
                      {"warnings", in.warnings}});
  }
  return {
      {"settings", SettingsToJson(settings)},
      {"identifier_relations", IdentifiersToJson(result.identifiers)},
      {"probe", ProbeReportToJson(result.probe)},
      {"inputs", inputs},
      {"alignment", AlignmentToJson(result.Entries())},
  };
}

std::string DumpJson(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void PrintSummary(std::ostream& out, const std::vector<AlignmentEntry>& entries) {
  size_t w_in = 5, w_rel = 8, w_path = 8;
  for (const auto& e : entries) {
    w_in = std::max(w_in, LocalName(e.input_relation).size());
    w_rel = std::max(w_rel, KbPathLabel(e.kb_path).size());
    w_path = std::max(w_path, e.api_path.size());
  }
  out << fmt::format("{:<{}}  {:<{}}  {:<{}}  {:<4}  {:<24}  {}\n", "input", w_in, "relation",
                     w_rel, "api path", w_path, "kind", "method", "confidence");
  for (const auto& e : entries) {
    out << fmt::format("{:<{}}  {:<{}}  {:<{}}  {:<4}  {:<24}  {:.3f} ({}/{})\n",
                       LocalName(e.input_relation), w_in, KbPathLabel(e.kb_path), w_rel,
                       e.api_path, w_path, MatchKindName(e.kind), MethodName(e.method),
                       e.confidence, e.matches, e.valid_responses);
  }
  if (entries.empty()) out << "(no alignments)\n";
}

}  // namespace linkpoint
