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

#ifndef LINKPOINT_PROBER_H_
#define LINKPOINT_PROBER_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linkpoint/api_connector.h"
#include "linkpoint/kb_store.h"

namespace linkpoint {

class ProbeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProbeOptions {
  size_t n_p = 25;
  uint64_t seed = 42;
  double theta_err = 0.80;
  double min_valid_fraction = 0.2;
  // Bodies are compared on this many leading bytes.
  size_t error_body_prefix = 2000;
  size_t workers = 4;
};

struct RelationProbe {
  std::string relation;
  std::vector<std::string> values;  // values actually sent
  size_t requests_sent = 0;
  size_t valid_responses = 0;
  size_t error_responses = 0;  // 2xx bodies that were unparseable or matched the error signature
  size_t http_failures = 0;    // non-2xx statuses and transport failures
  std::optional<std::string> error_signature;
  bool accepted = false;
  std::vector<std::string> warnings;
};

struct ProbeReport {
  std::vector<std::string> valid_input_relations;  // R_in, sorted
  std::optional<std::string> error_signature;      // first signature found
  std::vector<RelationProbe> relations;            // one per candidate, sorted
  std::vector<std::string> warnings;

  const RelationProbe* Find(std::string_view relation) const;
};

// Depth-1 predicates of the class's entities with at least one literal
// object, excluding the type predicate. Throws ProbeError for an empty class.
std::vector<std::string> CandidateInputRelations(const KnowledgeBase& kb,
                                                 std::string_view input_class);

// Up to n_p values of the relation, one per entity, drawn uniformly without
// replacement from the class's entities. Values occurring more than once in
// the KB are skipped. Deterministic for a given seed.
std::vector<std::string> SampleInputValues(const KnowledgeBase& kb, std::string_view relation,
                                           std::string_view input_class, size_t n_p,
                                           uint64_t seed,
                                           std::vector<std::string>* warnings = nullptr);

struct EntityValue {
  TermId entity;
  std::string value;
};

// Shared sampler behind SampleInputValues and the alignment phase: up to n
// (entity, value) pairs from a shuffled entity order seeded by (seed, label).
std::vector<EntityValue> SampleEntityValues(const KnowledgeBase& kb, std::string_view relation,
                                            std::string_view input_class, size_t n,
                                            uint64_t seed, std::string_view label);

struct ErrorDetection {
  std::optional<size_t> signature_index;
  std::optional<std::string> error_signature;
  std::vector<size_t> removed;    // includes the signature itself
  std::vector<size_t> surviving;
};

// The body similar (> theta_err) to the most others becomes the error
// signature; it and everything similar to it are removed. Ties go to the
// lowest index.
ErrorDetection DetectErrorResponses(const std::vector<std::string>& bodies, double theta_err,
                                    size_t prefix = 2000);

// Similarity check used when screening later responses against a signature.
bool MatchesErrorSignature(std::string_view body, std::string_view signature,
                           double theta_err, size_t prefix = 2000);

ProbeReport Probe(const KnowledgeBase& kb, ApiConnector& api, const ProbeOptions& options);

}  // namespace linkpoint

#endif  // LINKPOINT_PROBER_H_
