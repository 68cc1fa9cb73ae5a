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

#include "linkpoint/prober.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "linkpoint/parallel.h"
#include "linkpoint/random.h"
#include "linkpoint/response_model.h"
#include "linkpoint/similarity.h"

namespace linkpoint {

const RelationProbe* ProbeReport::Find(std::string_view relation) const {
  for (const auto& r : relations) {
    if (r.relation == relation) return &r;
  }
  return nullptr;
}

std::vector<std::string> CandidateInputRelations(const KnowledgeBase& kb,
                                                 std::string_view input_class) {
  std::vector<TermId> entities = kb.EntitiesOfClass(input_class);
  if (entities.empty()) {
    throw ProbeError(fmt::format("input class <{}> has no entities", input_class));
  }
  auto type_pred = kb.type_predicate();
  std::set<std::string> relations;
  for (TermId e : entities) {
    for (uint32_t idx : kb.BySubject(e)) {
      const Triple& t = kb.triples()[idx];
      if (type_pred && t.predicate == *type_pred) continue;
      if (kb.term(t.object).is_literal()) relations.insert(kb.term(t.predicate).value);
    }
  }
  return {relations.begin(), relations.end()};
}

std::vector<EntityValue> SampleEntityValues(const KnowledgeBase& kb, std::string_view relation,
                                            std::string_view input_class, size_t n,
                                            uint64_t seed, std::string_view label) {
  std::vector<EntityValue> out;
  auto pred = kb.FindIri(relation);
  if (!pred || n == 0) return out;
  std::vector<TermId> entities = kb.EntitiesOfClass(input_class);
  Rng rng = Rng::Derive(seed, std::string(label) + ":" + std::string(relation));
  rng.Shuffle(entities);
  for (TermId e : entities) {
    if (out.size() >= n) break;
    std::vector<std::string> values;
    for (uint32_t idx : kb.BySubject(e)) {
      const Triple& t = kb.triples()[idx];
      if (t.predicate != *pred || !kb.term(t.object).is_literal()) continue;
      const std::string& lexical = kb.term(t.object).value;
      if (lexical.empty() || kb.ValueFrequency(*pred, lexical) > 1) continue;
      values.push_back(lexical);
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end());
    out.push_back({e, values.front()});
  }
  return out;
}

std::vector<std::string> SampleInputValues(const KnowledgeBase& kb, std::string_view relation,
                                           std::string_view input_class, size_t n_p,
                                           uint64_t seed, std::vector<std::string>* warnings) {
  if (n_p == 0) throw std::invalid_argument("n_p must be >= 1");
  std::vector<std::string> out;
  for (auto& ev : SampleEntityValues(kb, relation, input_class, n_p, seed, "probe")) {
    out.push_back(std::move(ev.value));
  }
  if (warnings) {
    if (out.empty()) {
      warnings->push_back(
          fmt::format("<{}>: no value occurs exactly once; relation dropped", relation));
    } else if (out.size() < n_p) {
      warnings->push_back(fmt::format("<{}>: only {} usable values for {} requested probes",
                                      relation, out.size(), n_p));
    }
  }
  return out;
}

namespace {

std::string_view Prefix(std::string_view body, size_t prefix) {
  return body.substr(0, std::min(body.size(), prefix));
}

}  // namespace

bool MatchesErrorSignature(std::string_view body, std::string_view signature, double theta_err,
                           size_t prefix) {
  return LevenshteinSimilarAbove(Prefix(body, prefix), Prefix(signature, prefix), theta_err);
}

ErrorDetection DetectErrorResponses(const std::vector<std::string>& bodies, double theta_err,
                                    size_t prefix) {
  const size_t n = bodies.size();
  std::vector<std::vector<bool>> similar(n, std::vector<bool>(n, false));
  std::vector<size_t> counts(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (MatchesErrorSignature(bodies[i], bodies[j], theta_err, prefix)) {
        similar[i][j] = similar[j][i] = true;
        ++counts[i];
        ++counts[j];
      }
    }
  }
  ErrorDetection result;
  size_t best = 0;
  for (size_t i = 1; i < n; ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  if (n == 0 || counts[best] == 0) {
    for (size_t i = 0; i < n; ++i) result.surviving.push_back(i);
    return result;
  }
  result.signature_index = best;
  result.error_signature = bodies[best];
  for (size_t i = 0; i < n; ++i) {
    if (i == best || similar[best][i]) result.removed.push_back(i);
    else result.surviving.push_back(i);
  }
  return result;
}

ProbeReport Probe(const KnowledgeBase& kb, ApiConnector& api, const ProbeOptions& options) {
  ProbeReport report;
  const std::string& input_class = api.endpoint().input_class;
  std::vector<std::string> candidates = CandidateInputRelations(kb, input_class);
  const size_t min_valid = std::max<size_t>(
      1, static_cast<size_t>(std::ceil(options.min_valid_fraction *
                                       static_cast<double>(options.n_p) - 1e-9)));

  size_t total_sent = 0;
  size_t total_answered = 0;
  for (const std::string& relation : candidates) {
    RelationProbe probe;
    probe.relation = relation;
    probe.values = SampleInputValues(kb, relation, input_class, options.n_p, options.seed,
                                     &probe.warnings);
    const size_t n = probe.values.size();
    std::vector<std::optional<ApiResponse>> responses(n);
    ParallelFor(n, options.workers, [&](size_t i) {
      try {
        responses[i] = api.Fetch(probe.values[i]);
      } catch (const TransportError&) {
        responses[i] = std::nullopt;
      }
    });

    std::vector<std::string> bodies;
    probe.requests_sent = n;
    for (auto& r : responses) {
      if (!r) {
        ++probe.http_failures;
        continue;
      }
      ++total_answered;
      if (!r->is_success()) {
        ++probe.http_failures;
        continue;
      }
      try {
        ParseResponse(r->body);
      } catch (const UnparseableResponse&) {
        ++probe.error_responses;
        continue;
      }
      bodies.push_back(std::move(r->body));
    }
    total_sent += n;

    ErrorDetection detection =
        DetectErrorResponses(bodies, options.theta_err, options.error_body_prefix);
    probe.error_signature = detection.error_signature;
    probe.error_responses += detection.removed.size();
    probe.valid_responses = detection.surviving.size();
    probe.accepted = n > 0 && probe.valid_responses >= min_valid;
    if (probe.accepted) report.valid_input_relations.push_back(relation);
    if (!report.error_signature && probe.error_signature) {
      report.error_signature = probe.error_signature;
    }
    for (const auto& w : probe.warnings) report.warnings.push_back(w);
    report.relations.push_back(std::move(probe));
  }
  if (total_sent > 0 && total_answered == 0) {
    throw ProbeError(fmt::format("API '{}' did not answer any of {} probe requests",
                                 api.endpoint().name, total_sent));
  }
  return report;
}

}  // namespace linkpoint
