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

#ifndef LINKPOINT_HARNESS_H_
#define LINKPOINT_HARNESS_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "linkpoint/aligner.h"
#include "linkpoint/api_connector.h"
#include "linkpoint/kb_store.h"

#include <nlohmann/json.hpp>

namespace linkpoint {

// Vocabulary of the generated bibliographic KB.
namespace synth {
inline constexpr char kSchema[] = "https://kb.example.org/schema#";
inline constexpr char kPublication[] = "https://kb.example.org/schema#Publication";
inline constexpr char kPerson[] = "https://kb.example.org/schema#Person";
std::string Predicate(std::string_view local);  // kSchema + local
}  // namespace synth

// How the KB relations surface in the API record.
struct StructureTemplate {
  // year/genre inside facets[{type,value}]; else issued.year and genre.
  bool facets = false;
  bool references = true;  // references[{title, year}] distractor array
  bool venue_object = true;  // journal under venue.title; else top level "journal"
  int authors_min = 1;
  int authors_max = 4;
  int references_max = 3;
};

struct SyntheticPairConfig {
  size_t entity_count = 200;
  StructureTemplate structure;
  double name_abbreviation = 0.3;    // author name "M. Brenner" instead of "Martin Brenner"
  double identifier_reformat = 0.3;  // DOI upper-cased or de-hyphenated in the response
  double wrong_record = 0.1;         // a similar but different publication is returned
  double error_response = 0.1;       // known key answered with the error template
  size_t extra_leaf_count = 4;       // random non-matching leaves per record
  // KB relations whose value the API accepts as a lookup key (local names).
  std::vector<std::string> key_relations = {"doi", "title"};
  // Status for unknown keys: 200 returns the error template, anything else
  // returns that status with a short body.
  int unknown_key_status = 200;
  uint64_t seed = 1;

  static SyntheticPairConfig Standard(uint64_t seed);
  static SyntheticPairConfig ZeroNoise(uint64_t seed);
};

struct GoldEntry {
  KbPath kb_path;
  std::string api_path;
  MatchKind kind = MatchKind::kFixedPath;
};

// Canned API: lookup key -> reply. Unknown keys get the error template
// when unknown_status is 200, otherwise that status.
struct MockApi {
  std::string url_template;
  std::string input_class;
  std::map<std::string, HttpReply> responses;
  int unknown_status = 200;

  HttpReply Lookup(const std::string& value) const;
  ApiEndpoint Endpoint(std::string name = "synthetic") const;
};

struct SyntheticPair {
  SyntheticPairConfig config;
  std::string ntriples;
  KnowledgeBase kb;
  std::shared_ptr<const MockApi> api;
  std::vector<GoldEntry> gold;
};

SyntheticPair GenerateSyntheticPair(const SyntheticPairConfig& config);

// The error body the synthetic API returns for unknown keys.
std::string SyntheticErrorBody(const std::string& query);

// Serves a MockApi in-process. The lookup key is recovered by stripping the
// template's fixed prefix and suffix and percent-decoding the rest.
class MockTransport : public Transport {
 public:
  explicit MockTransport(std::shared_ptr<const MockApi> api) : api_(std::move(api)) {}
  HttpReply Get(const HttpRequest& request) override;
  uint64_t calls() const { return calls_.load(); }

 private:
  std::shared_ptr<const MockApi> api_;
  std::atomic<uint64_t> calls_{0};
};

// Recovers the {value} part of `url` for `url_template`; nullopt when the
// fixed parts do not match.
std::optional<std::string> ExtractTemplateValue(const std::string& url_template,
                                                const std::string& url);

// Fixture layout:
//   dir/kb.nt  dir/gold.json  dir/registry.json
//   dir/api/index.json  dir/api/r<N>.json
void WriteFixtures(const std::filesystem::path& dir, const SyntheticPair& pair);
std::shared_ptr<const MockApi> LoadReplayApi(const std::filesystem::path& api_dir);
std::vector<GoldEntry> LoadGold(const std::filesystem::path& path);
nlohmann::json GoldToJson(const std::vector<GoldEntry>& gold);

// A MockApi behind a real HTTP server on 127.0.0.1, for exercising
// HttpTransport end to end. The server stops on destruction.
class LoopbackServer {
 public:
  explicit LoopbackServer(std::shared_ptr<const MockApi> api);
  ~LoopbackServer();
  LoopbackServer(const LoopbackServer&) = delete;
  LoopbackServer& operator=(const LoopbackServer&) = delete;

  int port() const { return port_; }
  // The API's template rewritten to point at this server.
  std::string url_template() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::shared_ptr<const MockApi> api_;
  int port_ = 0;
  std::thread thread_;
};

struct Scores {
  size_t found = 0;
  size_t gold = 0;
  size_t correct = 0;
  size_t kind_mismatches = 0;  // right (kb_path, api_path), wrong FPM/BPM label
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Entries are compared on (kb_path, api_path) after de-duplicating across
// input relations. An empty found set has precision 1 only when gold is
// empty too; an empty gold set has recall 1.
Scores Evaluate(const std::vector<AlignmentEntry>& found, const std::vector<GoldEntry>& gold);

}  // namespace linkpoint

#endif  // LINKPOINT_HARNESS_H_
