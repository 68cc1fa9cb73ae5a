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

#include "linkpoint/identifier_extractor.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace linkpoint {

bool IdentifierRelationSet::Contains(const std::string& predicate) const {
  return std::any_of(relations.begin(), relations.end(),
                     [&](const IdentifierRelation& r) { return r.predicate == predicate; });
}

std::set<std::string> IdentifierRelationSet::Predicates() const {
  std::set<std::string> out;
  for (const auto& r : relations) out.insert(r.predicate);
  return out;
}

IdentifierRelationSet ExtractIdentifierRelations(const KnowledgeBase& kb,
                                                 const IdentifierOptions& options) {
  if (!(options.theta_id > 0.0 && options.theta_id <= 1.0)) {
    throw std::invalid_argument("theta_id must lie in (0, 1]");
  }
  IdentifierRelationSet result;
  result.theta_id = options.theta_id;
  for (TermId pred : kb.Predicates()) {
    std::unordered_set<TermId> objects;
    size_t literal_triples = 0;
    for (uint32_t idx : kb.ByPredicate(pred)) {
      const Triple& t = kb.triples()[idx];
      if (!kb.term(t.object).is_literal()) continue;
      ++literal_triples;
      objects.insert(t.object);
    }
    if (literal_triples == 0 || literal_triples < options.min_occurrences) continue;
    Functionality fun{objects.size(), literal_triples};
    if (fun.AtLeast(options.theta_id)) {
      result.relations.push_back({kb.term(pred).value, fun});
    }
  }
  return result;
}

}  // namespace linkpoint
