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

#include "linkpoint/aligner.h"

#include <algorithm>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "linkpoint/parallel.h"

namespace linkpoint {

namespace {

constexpr std::string_view kXsdAnyUri = "http://www.w3.org/2001/XMLSchema#anyURI";

}  // namespace

KbPath ToKbPath(const KnowledgeBase& kb, const std::vector<Hop>& hops) {
  KbPath out;
  out.reserve(hops.size());
  for (const Hop& h : hops) out.push_back({kb.term(h.predicate).value, h.direction});
  return out;
}

std::string LocalName(std::string_view iri) {
  size_t cut = iri.find_last_of("#/");
  if (cut == std::string_view::npos || cut + 1 >= iri.size()) return std::string(iri);
  return std::string(iri.substr(cut + 1));
}

std::string KbPathLabel(const KbPath& path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += LocalName(path[i].predicate);
    if (path[i].direction == Direction::kInverse) out += "^-1";
  }
  return out;
}

std::string_view ResponseOutcomeName(ResponseOutcome o) {
  switch (o) {
    case ResponseOutcome::kAccepted: return "accepted";
    case ResponseOutcome::kLowOverlap: return "low-overlap";
    case ResponseOutcome::kHttpFailure: return "http-failure";
    case ResponseOutcome::kTransportFailure: return "transport-failure";
    case ResponseOutcome::kUnparseable: return "unparseable";
    case ResponseOutcome::kErrorSignature: return "error-signature";
  }
  return "";
}

std::string_view MatchKindName(MatchKind k) {
  return k == MatchKind::kFixedPath ? "FPM" : "BPM";
}

AlignmentOptions AlignmentOptions::From(const GlobalSettings& s) {
  AlignmentOptions o;
  o.theta_str = s.theta_str;
  o.theta_rec = s.theta_rec;
  o.theta_err = s.theta_err;
  o.n_r = static_cast<size_t>(s.n_r);
  o.max_depth = s.max_depth;
  o.bpm_support_fraction = s.bpm_support_fraction;
  o.seed = s.seed;
  o.error_body_prefix = static_cast<size_t>(s.error_body_prefix);
  o.workers = static_cast<size_t>(s.workers);
  return o;
}

std::vector<MatchTriple> MatchRecord(const KnowledgeBase& kb,
                                     const std::vector<RelationValuePath>& record,
                                     const std::vector<PathValuePair>& response,
                                     const std::set<std::string>& identifier_relations,
                                     double theta_str, const IdentifierComparator& comparator) {
  // Relation signatures in order of first appearance.
  std::map<std::vector<Hop>, size_t> signature_ids;
  std::vector<const std::vector<Hop>*> signatures;
  std::vector<bool> signature_is_identifier;

  std::vector<size_t> leaf_ids;
  std::vector<PreparedString> leaves;
  for (size_t j = 0; j < response.size(); ++j) {
    const LeafValue& v = response[j].value;
    if (v.kind == LeafKind::kNull || v.text.empty()) continue;
    leaf_ids.push_back(j);
    leaves.emplace_back(v.text);
  }

  std::map<TermId, PreparedString> literals;
  // (signature, leaf) -> best so far
  std::map<std::pair<size_t, size_t>, ScoredMethod> best;

  for (const RelationValuePath& path : record) {
    auto [it, inserted] = signature_ids.emplace(path.hops, signatures.size());
    if (inserted) {
      signatures.push_back(&it->first);
      const std::string& terminal = kb.term(path.hops.back().predicate).value;
      signature_is_identifier.push_back(identifier_relations.count(terminal) > 0);
    }
    const size_t sig = it->second;
    const Term& literal = kb.term(path.value);
    if (literal.value.empty()) continue;
    auto lit = literals.try_emplace(path.value, literal.value).first;
    const bool iri_typed = literal.datatype == kXsdAnyUri;

    for (size_t k = 0; k < leaves.size(); ++k) {
      const PathValuePair& pair = response[leaf_ids[k]];
      ValueKind kind = ClassifyPair(literal.value, iri_typed, pair.value.text,
                                    signature_is_identifier[sig]);
      auto scored = BestMatch(lit->second, leaves[k], kind, theta_str, comparator);
      if (!scored) continue;
      auto [slot, fresh] = best.try_emplace({sig, leaf_ids[k]}, *scored);
      if (!fresh && scored->score > slot->second.score) slot->second = *scored;
    }
  }

  std::vector<MatchTriple> out;
  out.reserve(best.size());
  for (const auto& [key, scored] : best) {
    MatchTriple t;
    t.relation = ToKbPath(kb, *signatures[key.first]);
    t.path = response[key.second].path;
    t.method = scored.method;
    t.score = scored.score;
    out.push_back(std::move(t));
  }
  return out;
}

double RecordOverlap(const std::vector<MatchTriple>& matches, size_t record_size,
                     size_t response_size) {
  size_t smallest = std::min(record_size, response_size);
  if (smallest == 0 || matches.empty()) return 0.0;
  std::set<KbPath> relations;
  for (const auto& m : matches) relations.insert(m.relation);
  return static_cast<double>(relations.size()) / static_cast<double>(smallest);
}

CandidateMatchSet CollectCandidates(const KnowledgeBase& kb, ApiConnector& api,
                                    const std::string& input_relation,
                                    const std::set<std::string>& identifier_relations,
                                    const std::optional<std::string>& error_signature,
                                    const AlignmentOptions& options,
                                    const IdentifierComparator& comparator) {
  CandidateMatchSet result;
  result.input_relation = input_relation;
  if (options.n_r == 0) return result;

  const std::string& input_class = api.endpoint().input_class;
  std::vector<EntityValue> samples =
      SampleEntityValues(kb, input_relation, input_class, options.n_r, options.seed, "align");
  if (samples.size() < options.n_r) {
    result.warnings.push_back(fmt::format("<{}>: only {} usable entities for {} requests",
                                          input_relation, samples.size(), options.n_r));
  }

  PathQuery query;
  query.max_depth = options.max_depth;
  if (auto type_pred = kb.type_predicate()) query.excluded_predicates.push_back(*type_pred);

  const size_t n = samples.size();
  std::vector<ResponseRecord> records(n);
  std::vector<std::vector<MatchTriple>> accepted(n);
  ParallelFor(n, options.workers, [&](size_t i) {
    ResponseRecord& rec = records[i];
    rec.request_index = i;
    rec.entity = kb.term(samples[i].entity).value;
    rec.request_value = samples[i].value;
    ApiResponse response;
    try {
      response = api.Fetch(samples[i].value);
    } catch (const TransportError&) {
      rec.outcome = ResponseOutcome::kTransportFailure;
      return;
    }
    rec.status = response.status;
    if (!response.is_success()) {
      rec.outcome = ResponseOutcome::kHttpFailure;
      return;
    }
    if (error_signature && MatchesErrorSignature(response.body, *error_signature,
                                                 options.theta_err, options.error_body_prefix)) {
      rec.outcome = ResponseOutcome::kErrorSignature;
      return;
    }
    std::vector<PathValuePair> res;
    try {
      res = Flatten(ParseResponse(response.body));
    } catch (const UnparseableResponse&) {
      rec.outcome = ResponseOutcome::kUnparseable;
      return;
    }
    std::vector<RelationValuePath> kb_record = kb.RelationValuePaths(samples[i].entity, query);
    rec.record_size = kb_record.size();
    rec.response_size = res.size();
    std::vector<MatchTriple> matches = MatchRecord(kb, kb_record, res, identifier_relations,
                                                   options.theta_str, comparator);
    rec.match_count = matches.size();
    std::set<KbPath> matched;
    for (const auto& m : matches) matched.insert(m.relation);
    rec.matched_relations = matched.size();
    rec.overlap = RecordOverlap(matches, rec.record_size, rec.response_size);
    if (rec.record_size == 0 || rec.response_size == 0 || rec.overlap < options.theta_rec) {
      // The API most likely answered about a different entity.
      rec.outcome = ResponseOutcome::kLowOverlap;
      return;
    }
    rec.outcome = ResponseOutcome::kAccepted;
    for (auto& m : matches) m.request_index = i;
    accepted[i] = std::move(matches);
  });

  result.n_sent = n;
  for (size_t i = 0; i < n; ++i) {
    if (records[i].outcome == ResponseOutcome::kAccepted) {
      ++result.n_valid;
      for (auto& m : accepted[i]) result.triples.push_back(std::move(m));
    }
  }
  result.responses = std::move(records);
  if (n > 0 && result.n_valid == 0) {
    result.warnings.push_back(
        fmt::format("<{}>: none of {} responses passed the overlap gate", input_relation, n));
  }
  return result;
}

namespace {

struct PathGroup {
  std::set<size_t> requests;
  std::vector<const MatchTriple*> triples;
};

}  // namespace

std::vector<AlignmentEntry> Finalize(const CandidateMatchSet& candidates,
                                     const FinalizeOptions& options) {
  std::vector<AlignmentEntry> out;
  if (candidates.n_valid == 0) return out;

  std::map<KbPath, std::vector<const MatchTriple*>> by_relation;
  for (const auto& t : candidates.triples) by_relation[t.relation].push_back(&t);

  for (const auto& [relation, triples] : by_relation) {
    std::map<std::string, PathGroup> groups;
    std::map<std::string, ResponsePath> generalized;
    for (const MatchTriple* t : triples) {
      ResponsePath g = Generalize(t->path);
      std::string key = g.ToString();
      auto& group = groups[key];
      group.requests.insert(t->request_index);
      group.triples.push_back(t);
      generalized.emplace(key, std::move(g));
    }

    // Reciprocal length discount; equal lengths keep the raw count.
    const std::string* best_key = nullptr;
    double best_score = -1.0;
    size_t best_delta = 0;
    for (const auto& [key, group] : groups) {
      size_t len_p = generalized.at(key).length();
      size_t delta = len_p > relation.size() ? len_p - relation.size() : relation.size() - len_p;
      double score = static_cast<double>(group.requests.size()) /
                     static_cast<double>(std::max<size_t>(1, delta));
      if (score > best_score || (score == best_score && delta < best_delta)) {
        best_key = &key;
        best_score = score;
        best_delta = delta;
      }
    }
    const PathGroup& winner = groups.at(*best_key);
    const ResponsePath& pattern = generalized.at(*best_key);

    // Distinct concrete labels behind each wildcard position.
    bool branching = false;
    for (size_t pos = 0; pos < pattern.segments.size(); ++pos) {
      if (pattern.segments[pos].kind != SegmentKind::kWildcard) continue;
      std::set<std::string> labels;
      for (const MatchTriple* t : winner.triples) labels.insert(t->path.segments[pos].label);
      if (labels.size() >= 2) branching = true;
    }

    AlignmentEntry entry;
    entry.input_relation = candidates.input_relation;
    entry.kb_path = relation;
    entry.kind = branching ? MatchKind::kBranchingPoint : MatchKind::kFixedPath;
    entry.api_path = branching ? pattern.ToString() : winner.triples.front()->path.ToString();
    entry.matches = winner.requests.size();
    entry.valid_responses = candidates.n_valid;
    entry.confidence =
        static_cast<double>(entry.matches) / static_cast<double>(candidates.n_valid);

    std::map<SimilarityMethod, size_t> method_counts;
    for (const MatchTriple* t : winner.triples) ++method_counts[t->method];
    size_t top = 0;
    for (const auto& [method, count] : method_counts) {
      if (count > top) {
        top = count;
        entry.method = method;
      }
    }

    bool accepted = entry.confidence >= options.theta_rec;
    if (accepted && branching) {
      // Share of the responses matching r at all that match it on P*.
      std::set<size_t> any;
      for (const MatchTriple* t : triples) any.insert(t->request_index);
      double support = static_cast<double>(winner.requests.size()) /
                       static_cast<double>(any.size());
      accepted = support >= options.bpm_support_fraction;
    }
    if (accepted) out.push_back(std::move(entry));
  }
  return out;
}

std::vector<AlignmentEntry> AlignmentResult::Entries() const {
  std::vector<AlignmentEntry> all;
  for (const auto& input : inputs) {
    all.insert(all.end(), input.entries.begin(), input.entries.end());
  }
  std::sort(all.begin(), all.end(), [](const AlignmentEntry& a, const AlignmentEntry& b) {
    return std::tie(a.input_relation, a.kb_path, a.api_path) <
           std::tie(b.input_relation, b.kb_path, b.api_path);
  });
  return all;
}

AlignmentResult RunAlignment(const KnowledgeBase& kb, ApiConnector& api,
                             const GlobalSettings& settings) {
  AlignmentResult result;
  IdentifierOptions id_options;
  id_options.theta_id = settings.theta_id;
  id_options.min_occurrences = static_cast<size_t>(settings.identifier_min_occurrences);
  result.identifiers = ExtractIdentifierRelations(kb, id_options);
  const std::set<std::string> identifier_relations = result.identifiers.Predicates();
  auto comparator = MakeIdentifierComparator(settings.identifier_comparator);

  ProbeOptions probe_options;
  probe_options.n_p = static_cast<size_t>(settings.n_p);
  probe_options.seed = settings.seed;
  probe_options.theta_err = settings.theta_err;
  probe_options.min_valid_fraction = settings.min_valid_fraction;
  probe_options.error_body_prefix = static_cast<size_t>(settings.error_body_prefix);
  probe_options.workers = static_cast<size_t>(settings.workers);
  result.probe = Probe(kb, api, probe_options);

  const AlignmentOptions options = AlignmentOptions::From(settings);
  FinalizeOptions finalize_options{settings.theta_rec, settings.bpm_support_fraction};
  for (const std::string& input : result.probe.valid_input_relations) {
    const RelationProbe* probe = result.probe.Find(input);
    CandidateMatchSet candidates =
        CollectCandidates(kb, api, input, identifier_relations,
                          probe ? probe->error_signature : std::nullopt, options, *comparator);
    InputAlignment alignment;
    alignment.input_relation = input;
    alignment.n_sent = candidates.n_sent;
    alignment.n_valid = candidates.n_valid;
    alignment.triple_count = candidates.triples.size();
    alignment.entries = Finalize(candidates, finalize_options);
    alignment.warnings = std::move(candidates.warnings);
    result.inputs.push_back(std::move(alignment));
  }
  return result;
}

}  // namespace linkpoint
