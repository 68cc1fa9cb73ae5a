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

#ifndef LINKPOINT_ALIGNER_H_
#define LINKPOINT_ALIGNER_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "linkpoint/api_connector.h"
#include "linkpoint/identifier_extractor.h"
#include "linkpoint/kb_store.h"
#include "linkpoint/prober.h"
#include "linkpoint/response_model.h"
#include "linkpoint/settings.h"
#include "linkpoint/similarity.h"

namespace linkpoint {

// One hop of a KB relation path, by IRI so alignments outlive the KB.
struct PathHop {
  std::string predicate;
  Direction direction = Direction::kForward;
  auto operator<=>(const PathHop&) const = default;
};

using KbPath = std::vector<PathHop>;

KbPath ToKbPath(const KnowledgeBase& kb, const std::vector<Hop>& hops);
// "creatorList.member.name" using local names; inverse hops get "^-1".
std::string KbPathLabel(const KbPath& path);
std::string LocalName(std::string_view iri);

// Evidence that relation path `relation` matched the leaf at `path` in
// response `request_index`.
struct MatchTriple {
  KbPath relation;
  ResponsePath path;  // concrete indices retained
  SimilarityMethod method = SimilarityMethod::kEqual;
  double score = 0.0;
  size_t request_index = 0;
};

enum class ResponseOutcome : uint8_t {
  kAccepted,
  kLowOverlap,
  kHttpFailure,
  kTransportFailure,
  kUnparseable,
  kErrorSignature,
};

std::string_view ResponseOutcomeName(ResponseOutcome o);

// Per-request provenance, enough to replay the overlap gate.
struct ResponseRecord {
  size_t request_index = 0;
  std::string entity;
  std::string request_value;
  ResponseOutcome outcome = ResponseOutcome::kAccepted;
  int status = 0;
  size_t record_size = 0;    // |rec|
  size_t response_size = 0;  // |res|
  size_t matched_relations = 0;
  size_t match_count = 0;    // triples found before gating
  double overlap = 0.0;
};

struct CandidateMatchSet {
  std::string input_relation;
  std::vector<MatchTriple> triples;  // only from accepted responses
  size_t n_sent = 0;
  size_t n_valid = 0;
  std::vector<ResponseRecord> responses;
  std::vector<std::string> warnings;
};

enum class MatchKind : uint8_t { kFixedPath, kBranchingPoint };
std::string_view MatchKindName(MatchKind k);

struct AlignmentEntry {
  std::string input_relation;
  KbPath kb_path;
  std::string api_path;  // concrete for FPM, wildcarded for BPM
  MatchKind kind = MatchKind::kFixedPath;
  SimilarityMethod method = SimilarityMethod::kEqual;
  double confidence = 0.0;
  size_t matches = 0;          // responses supporting (kb_path, api_path)
  size_t valid_responses = 0;  // confidence denominator
};

// Compares every KB value with every response leaf and keeps, per
// (relation path, concrete response path), the best method reaching theta_str.
std::vector<MatchTriple> MatchRecord(const KnowledgeBase& kb,
                                     const std::vector<RelationValuePath>& record,
                                     const std::vector<PathValuePair>& response,
                                     const std::set<std::string>& identifier_relations,
                                     double theta_str, const IdentifierComparator& comparator);

// Distinct matched relation paths divided by min(|rec|, |res|).
double RecordOverlap(const std::vector<MatchTriple>& matches, size_t record_size,
                     size_t response_size);

struct AlignmentOptions {
  double theta_str = 0.5;
  double theta_rec = 0.1;
  double theta_err = 0.80;
  size_t n_r = 75;
  int max_depth = 3;
  double bpm_support_fraction = 0.5;
  uint64_t seed = 42;
  size_t error_body_prefix = 2000;
  size_t workers = 4;

  static AlignmentOptions From(const GlobalSettings& s);
};

CandidateMatchSet CollectCandidates(const KnowledgeBase& kb, ApiConnector& api,
                                    const std::string& input_relation,
                                    const std::set<std::string>& identifier_relations,
                                    const std::optional<std::string>& error_signature,
                                    const AlignmentOptions& options,
                                    const IdentifierComparator& comparator);

struct FinalizeOptions {
  double theta_rec = 0.1;
  double bpm_support_fraction = 0.5;
};

// Reduces accumulated evidence to at most one entry per KB relation path.
std::vector<AlignmentEntry> Finalize(const CandidateMatchSet& candidates,
                                     const FinalizeOptions& options);

struct InputAlignment {
  std::string input_relation;
  size_t n_sent = 0;
  size_t n_valid = 0;
  size_t triple_count = 0;
  std::vector<AlignmentEntry> entries;
  std::vector<std::string> warnings;
};

struct AlignmentResult {
  IdentifierRelationSet identifiers;
  ProbeReport probe;
  std::vector<InputAlignment> inputs;

  // All entries, sorted by input relation, KB path, then API path.
  std::vector<AlignmentEntry> Entries() const;
};

// Identifier extraction, probing, then candidate collection and
// finalization for every input relation found.
AlignmentResult RunAlignment(const KnowledgeBase& kb, ApiConnector& api,
                             const GlobalSettings& settings);

}  // namespace linkpoint

#endif  // LINKPOINT_ALIGNER_H_
