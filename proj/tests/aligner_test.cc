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

#include <set>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "linkpoint/harness.h"
#include "test_util.h"

namespace linkpoint {
namespace {

using testing::Ex;
using testing::FnTransport;
using testing::KbFromText;
using testing::Link;
using testing::Stmt;
using testing::TestEndpoint;
using testing::TypeOf;

KbPath Rel(std::initializer_list<const char*> locals) {
  KbPath p;
  for (const char* l : locals) p.push_back({Ex(l), Direction::kForward});
  return p;
}

MatchTriple Triple(const KbPath& r, const std::string& path, size_t request,
                   SimilarityMethod m = SimilarityMethod::kEqual) {
  return MatchTriple{r, ParseResponsePath(path), m, 1.0, request};
}

CandidateMatchSet Set(size_t n_valid) {
  CandidateMatchSet c;
  c.input_relation = Ex("doi");
  c.n_sent = n_valid;
  c.n_valid = n_valid;
  return c;
}

TEST(KbPathTest, Labels) {
  KbPath p = Rel({"creatorList", "member", "name"});
  EXPECT_EQ(KbPathLabel(p), "creatorList.member.name");
  p[0].direction = Direction::kInverse;
  EXPECT_EQ(KbPathLabel(p), "creatorList^-1.member.name");
  EXPECT_EQ(LocalName("https://kb.example.org/schema#title"), "title");
  EXPECT_EQ(LocalName("http://ex.org/a/b"), "b");
}

TEST(RecordOverlapTest, Examples) {
  std::vector<MatchTriple> m;
  for (const char* r : {"a", "b", "c", "d"}) m.push_back(Triple(Rel({r}), "x", 0));
  m.push_back(Triple(Rel({"a"}), "y", 0));  // same relation, second leaf
  EXPECT_DOUBLE_EQ(RecordOverlap(m, 10, 8), 0.5);
  EXPECT_DOUBLE_EQ(RecordOverlap({}, 10, 8), 0.0);
  EXPECT_DOUBLE_EQ(RecordOverlap(m, 0, 8), 0.0);
  EXPECT_DOUBLE_EQ(RecordOverlap(m, 4, 100), 1.0);
}

TEST(MatchRecordTest, KindsAndBestMethod) {
  std::string text = TypeOf("p1", "Pub") + Stmt("p1", "title", "Some example Title") +
                     Stmt("p1", "doi", "10.1/abc-1") + Stmt("p1", "year", "2020") +
                     Link("p1", "creator", "a1") + Stmt("a1", "name", "Martin Brenner");
  auto kb = KbFromText(text);
  PathQuery q;
  q.excluded_predicates.push_back(*kb.type_predicate());
  auto record = kb.RelationValuePaths(*kb.FindIri(Ex("p1")), q);
  auto response = Flatten(ParseResponse(
      R"({"label":"Some Title","doi":"10.1/ABC1","issued":{"year":2020},)"
      R"("authors":[{"name":"M. Brenner"}]})"));
  NormalizedExactComparator cmp;
  auto triples = MatchRecord(kb, record, response, {Ex("doi")}, 0.5, cmp);

  std::map<std::pair<std::string, std::string>, SimilarityMethod> got;
  for (const auto& t : triples) {
    auto key = std::make_pair(KbPathLabel(t.relation), t.path.ToString());
    EXPECT_TRUE(got.emplace(key, t.method).second) << "duplicate " << key.first;
    EXPECT_GE(t.score, 0.5);
  }
  EXPECT_EQ(got.at({"title", "label"}), SimilarityMethod::kJaroWinkler);
  EXPECT_EQ(got.at({"doi", "doi"}), SimilarityMethod::kIdentifier);
  EXPECT_EQ(got.at({"year", "issued.year"}), SimilarityMethod::kEqual);
  EXPECT_TRUE(got.count({"creator.name", "authors.0.name"}));
  EXPECT_FALSE(got.count({"year", "doi"}));
  EXPECT_FALSE(got.count({"doi", "label"}));
}

TEST(MatchRecordTest, ThetaOneKeepsOnlyEquals) {
  auto kb = KbFromText(TypeOf("p", "C") + Stmt("p", "t", "Alpha") + Stmt("p", "u", "Beta"));
  auto record = kb.RelationValuePaths(*kb.FindIri(Ex("p")), {});
  auto response = Flatten(ParseResponse(R"({"a":"Alpha","b":"Betas","c":"alpha"})"));
  NormalizedExactComparator cmp;
  auto triples = MatchRecord(kb, record, response, {}, 1.0, cmp);
  std::set<std::string> paths;
  for (const auto& t : triples) paths.insert(t.path.ToString());
  EXPECT_EQ(paths, (std::set<std::string>{"a", "c"}));
}

TEST(FinalizeTest, ConfidenceEightyFiveOverHundred) {
  auto c = Set(100);
  for (size_t i = 0; i < 85; ++i) c.triples.push_back(Triple(Rel({"year"}), "facets.0.value", i));
  auto out = Finalize(c, {});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MatchKind::kFixedPath);
  EXPECT_EQ(out[0].api_path, "facets.0.value");
  EXPECT_EQ(out[0].matches, 85u);
  EXPECT_EQ(out[0].valid_responses, 100u);
  EXPECT_DOUBLE_EQ(out[0].confidence, 0.85);
  EXPECT_EQ(out[0].input_relation, Ex("doi"));
}

TEST(FinalizeTest, BranchingAuthors) {
  auto c = Set(20);
  KbPath names = Rel({"creatorList", "member", "name"});
  for (size_t i = 0; i < 20; ++i) {
    for (size_t a = 0; a < 1 + i % 5; ++a) {
      c.triples.push_back(Triple(names, fmt::format("authors.{}.name", a), i));
    }
  }
  auto out = Finalize(c, {});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MatchKind::kBranchingPoint);
  EXPECT_EQ(out[0].api_path, "authors.*.name");
  EXPECT_EQ(out[0].matches, 20u);
  EXPECT_DOUBLE_EQ(out[0].confidence, 1.0);
}

TEST(FinalizeTest, SingleIndexStaysFixed) {
  auto c = Set(10);
  for (size_t i = 0; i < 10; ++i) c.triples.push_back(Triple(Rel({"n"}), "authors.0.name", i));
  auto out = Finalize(c, {});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MatchKind::kFixedPath);
  EXPECT_EQ(out[0].api_path, "authors.0.name");
}

TEST(FinalizeTest, LengthDiscount) {
  // 1-hop relation: "label" has delta 0 (divisor 1), "meta.x.label" delta 2.
  auto build = [](size_t near, size_t far) {
    auto c = Set(100);
    for (size_t i = 0; i < near; ++i) c.triples.push_back(Triple(Rel({"t"}), "label", i));
    for (size_t i = 0; i < far; ++i) c.triples.push_back(Triple(Rel({"t"}), "meta.x.label", 50 + i));
    return c;
  };
  EXPECT_EQ(Finalize(build(10, 15), {})[0].api_path, "label");         // 10 vs 7.5
  EXPECT_EQ(Finalize(build(10, 25), {})[0].api_path, "meta.x.label");  // 10 vs 12.5
  EXPECT_EQ(Finalize(build(10, 25), {})[0].matches, 25u);
}

TEST(FinalizeTest, TiesPreferSmallerDeltaThenKey) {
  auto c = Set(20);
  for (size_t i = 0; i < 5; ++i) c.triples.push_back(Triple(Rel({"t"}), "z", i));
  for (size_t i = 0; i < 10; ++i) c.triples.push_back(Triple(Rel({"t"}), "a.b.c", 10 + i));
  auto out = Finalize(c, {});
  EXPECT_EQ(out[0].api_path, "z");  // 5/1 == 10/2

  auto d = Set(20);
  for (size_t i = 0; i < 5; ++i) d.triples.push_back(Triple(Rel({"t"}), "b", i));
  for (size_t i = 0; i < 5; ++i) d.triples.push_back(Triple(Rel({"t"}), "a", 10 + i));
  EXPECT_EQ(Finalize(d, {})[0].api_path, "a");
}

TEST(FinalizeTest, ThetaRecFilters) {
  auto c = Set(100);
  for (size_t i = 0; i < 9; ++i) c.triples.push_back(Triple(Rel({"t"}), "label", i));
  EXPECT_TRUE(Finalize(c, {}).empty());
  c.triples.push_back(Triple(Rel({"t"}), "label", 9));
  EXPECT_EQ(Finalize(c, {}).size(), 1u);  // 10/100 == theta_rec is enough
}

TEST(FinalizeTest, BpmNeedsSupport) {
  // Winner authors.*.name: 8 responses at delta 2 (score 4) beats three
  // 3-response delta-0 groups (score 3), yet holds only 8 of 17 responses.
  auto c = Set(40);
  for (size_t i = 0; i < 8; ++i) {
    c.triples.push_back(Triple(Rel({"n"}), fmt::format("authors.{}.name", i % 2), i));
  }
  size_t next = 8;
  for (const char* key : {"editor", "chair", "owner"}) {
    for (int k = 0; k < 3; ++k) c.triples.push_back(Triple(Rel({"n"}), key, next++));
  }
  EXPECT_TRUE(Finalize(c, {}).empty());
  FinalizeOptions lenient;
  lenient.bpm_support_fraction = 0.4;
  auto out = Finalize(c, lenient);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].api_path, "authors.*.name");
}

TEST(FinalizeTest, MajorityMethodAndOneEntryPerRelation) {
  auto c = Set(10);
  for (size_t i = 0; i < 10; ++i) {
    c.triples.push_back(Triple(Rel({"t"}), "label", i,
                               i < 7 ? SimilarityMethod::kJaroWinkler : SimilarityMethod::kEqual));
    c.triples.push_back(Triple(Rel({"u"}), "other", i));
  }
  auto out = Finalize(c, {});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].kb_path, Rel({"t"}));
  EXPECT_EQ(out[0].method, SimilarityMethod::kJaroWinkler);
  EXPECT_EQ(out[1].kb_path, Rel({"u"}));
}

TEST(FinalizeTest, NoValidResponses) {
  auto c = Set(0);
  c.triples.push_back(Triple(Rel({"t"}), "label", 0));
  EXPECT_TRUE(Finalize(c, {}).empty());
}

// Twelve literal relations per entity; wrong records share only a similar
// title. The ten filler fields are numeric, so they only match exactly.
class GateFixture : public ::testing::Test {
 protected:
  static std::string Filler(int i, int f) { return std::to_string(100000 + i * 100 + f); }

  void SetUp() override {
    std::string text;
    for (int i = 0; i < 30; ++i) {
      std::string s = fmt::format("p{}", i);
      text += TypeOf(s, "Pub") + Stmt(s, "doi", fmt::format("10.5/{}", i)) +
              Stmt(s, "title", fmt::format("Graph methods for record linkage volume {}", i));
      for (int f = 0; f < 10; ++f) {
        text += Stmt(s, fmt::format("f{}", f), Filler(i, f));
      }
    }
    kb_ = KbFromText(text);
    for (int i = 0; i < 30; i += 3) wrong_.insert(fmt::format("10.5/{}", i));
    transport_ = std::make_shared<FnTransport>([this](const std::string& url) {
      std::string doi = *ExtractTemplateValue(TestEndpoint("").url_template, url);
      int i = std::stoi(doi.substr(5));
      nlohmann::json body;
      if (i % 3 == 0) {
        body["label"] = fmt::format("Graph methods for record linkage volume {}x", i);
        for (int k = 0; k < 11; ++k) body[fmt::format("z{}", k)] = fmt::format("qq{}", k * 37);
      } else {
        body["doi"] = doi;
        body["label"] = fmt::format("Graph methods for record linkage volume {}", i);
        for (int f = 0; f < 10; ++f) body[fmt::format("g{}", f)] = Filler(i, f);
      }
      return HttpReply{200, body.dump()};
    });
  }

  CandidateMatchSet Collect(size_t n_r) {
    ApiConnector api(TestEndpoint(Ex("Pub")), transport_);
    AlignmentOptions o;
    o.n_r = n_r;
    NormalizedExactComparator cmp;
    return CollectCandidates(kb_, api, Ex("doi"), {Ex("doi")}, std::nullopt, o, cmp);
  }

  KnowledgeBase kb_;
  std::shared_ptr<FnTransport> transport_;
  std::set<std::string> wrong_;
};

TEST_F(GateFixture, WrongRecordsContributeNothing) {
  CandidateMatchSet c = Collect(30);
  EXPECT_EQ(c.n_sent, 30u);
  EXPECT_EQ(c.n_valid, 20u);
  ASSERT_EQ(wrong_.size(), 10u);
  std::set<size_t> accepted;
  for (const auto& r : c.responses) {
    // Replay the gate from the recorded sizes.
    double overlap = static_cast<double>(r.matched_relations) /
                     static_cast<double>(std::min(r.record_size, r.response_size));
    EXPECT_DOUBLE_EQ(r.overlap, overlap);
    if (wrong_.count(r.request_value)) {
      EXPECT_EQ(r.outcome, ResponseOutcome::kLowOverlap) << r.request_value;
      EXPECT_LT(r.overlap, 0.1);
      EXPECT_GT(r.match_count, 0u);  // the similar title did match
    } else {
      EXPECT_EQ(r.outcome, ResponseOutcome::kAccepted) << r.request_value;
      accepted.insert(r.request_index);
    }
  }
  for (const auto& t : c.triples) EXPECT_TRUE(accepted.count(t.request_index));
}

TEST_F(GateFixture, ZeroRequests) {
  CandidateMatchSet c = Collect(0);
  EXPECT_EQ(c.n_sent, 0u);
  EXPECT_TRUE(c.triples.empty());
  EXPECT_TRUE(Finalize(c, {}).empty());
  EXPECT_EQ(transport_->calls(), 0);
}

TEST(RunAlignmentTest, AllErrorApiYieldsEmptyAlignment) {
  auto pair = GenerateSyntheticPair(SyntheticPairConfig::ZeroNoise(3));
  auto t = std::make_shared<FnTransport>([](const std::string& url) {
    return HttpReply{200, SyntheticErrorBody(url)};
  });
  ApiConnector api(pair.api->Endpoint(), t);
  GlobalSettings s;
  AlignmentResult r = RunAlignment(pair.kb, api, s);
  EXPECT_TRUE(r.probe.valid_input_relations.empty());
  EXPECT_TRUE(r.Entries().empty());
}

TEST(RunAlignmentTest, ZeroNoiseFindsGold) {
  auto pair = GenerateSyntheticPair(SyntheticPairConfig::ZeroNoise(5));
  ApiConnector api(pair.api->Endpoint(), std::make_shared<MockTransport>(pair.api));
  AlignmentResult r = RunAlignment(pair.kb, api, GlobalSettings{});
  Scores s = Evaluate(r.Entries(), pair.gold);
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_DOUBLE_EQ(s.recall, 1.0);
  EXPECT_EQ(s.kind_mismatches, 0u);
  auto entries = r.Entries();
  EXPECT_TRUE(std::is_sorted(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.input_relation, a.kb_path, a.api_path) <
           std::tie(b.input_relation, b.kb_path, b.api_path);
  }));
}

}  // namespace
}  // namespace linkpoint
