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

#ifndef LINKPOINT_IDENTIFIER_EXTRACTOR_H_
#define LINKPOINT_IDENTIFIER_EXTRACTOR_H_

#include <set>
#include <string>
#include <vector>

#include "linkpoint/kb_store.h"

namespace linkpoint {

struct IdentifierRelation {
  std::string predicate;
  // Inverse functionality over the predicate's literal-valued triples.
  Functionality inverse_functionality;
};

struct IdentifierRelationSet {
  double theta_id = 0.99;
  std::vector<IdentifierRelation> relations;  // sorted by predicate IRI

  bool Contains(const std::string& predicate) const;
  std::set<std::string> Predicates() const;
};

struct IdentifierOptions {
  double theta_id = 0.99;
  // Predicates with fewer literal triples are never identifiers.
  size_t min_occurrences = 10;
};

// A predicate is an identifier relation when the inverse functionality of its
// literal-valued triples reaches theta_id. IRI-only predicates never qualify.
IdentifierRelationSet ExtractIdentifierRelations(const KnowledgeBase& kb,
                                                 const IdentifierOptions& options = {});

}  // namespace linkpoint

#endif  // LINKPOINT_IDENTIFIER_EXTRACTOR_H_
