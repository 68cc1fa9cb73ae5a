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

#ifndef LINKPOINT_REPORT_H_
#define LINKPOINT_REPORT_H_

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linkpoint/aligner.h"
#include "linkpoint/identifier_extractor.h"
#include "linkpoint/prober.h"
#include "linkpoint/settings.h"

namespace linkpoint {

nlohmann::json KbPathToJson(const KbPath& path);
KbPath KbPathFromJson(const nlohmann::json& j);

// The alignment file: an array of
//   {input_relation, kb_path:[{predicate,direction}], api_path, kind, method,
//    confidence, support:{matches, valid_responses}}
nlohmann::json AlignmentToJson(const std::vector<AlignmentEntry>& entries);
std::vector<AlignmentEntry> AlignmentFromJson(const nlohmann::json& j);

nlohmann::json IdentifiersToJson(const IdentifierRelationSet& ids);
nlohmann::json ProbeReportToJson(const ProbeReport& report);

// Run report: settings, identifier_relations, probe, per-input statistics
// and the alignment.
nlohmann::json RunReportToJson(const AlignmentResult& result, const GlobalSettings& settings);

// Stable text form: two-space indent, trailing newline.
std::string DumpJson(const nlohmann::json& j);

// Human-readable table: relation -> path, kind, confidence.
void PrintSummary(std::ostream& out, const std::vector<AlignmentEntry>& entries);

}  // namespace linkpoint

#endif  // LINKPOINT_REPORT_H_
