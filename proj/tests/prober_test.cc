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

#include <set>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "linkpoint/harness.h"
#include "linkpoint/random.h"
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

// n publications: unique doi and title, shared year (5 values), IRI-only
// author link, and a mixed relation with one literal per entity.
std::string Publications(int n) {
  std::string text;
  for (int i = 0; i < n; ++i) {
    std::string s = fmt::format("p{}", i);
    text += TypeOf(s, "Pub");
    text += Stmt(s, "doi", fmt::format("10.1000/{:04d}", i));
    text += Stmt(s, "title", fmt::format("Paper number {} on topic {}", i, i * 7 % 13));
    text += Stmt(s, "year", std::to_string(2000 + i % 5));
    text += Link(s, "author", fmt::format("a{}", i));
    if (i % 2 == 0) text += Stmt(s, "mixed", fmt::format("m{}", i));
    else text += Link(s, "mixed", fmt::format("x{}", i));
  }
  return text;
}

// Records must differ by more than 20% of their bytes, or they would look
// like one error template.
std::string RecordFor(const std::string& doi) {
  Rng rng = Rng::Derive(0, doi);
  std::string title, abstract;
  for (int i = 0; i < 40; ++i) title += static_cast<char>('a' + rng.Below(26));
  for (int i = 0; i < 120; ++i) abstract += static_cast<char>('a' + rng.Below(26));
  return nlohmann::json{{"doi", doi}, {"title", title}, {"abstract", abstract}}.dump();
}

std::string ErrorBody(const std::string& q) {
  return fmt::format(R"({{"status":"error","message":"No record matches the query {}"}})", q);
}

std::string ValueOf(const std::string& url) {
  return *ExtractTemplateValue(TestEndpoint("").url_template, url);
}

// Answers DOIs with a record, anything else with the error template.
std::shared_ptr<FnTransport> DoiOnlyApi() {
  return std::make_shared<FnTransport>([](const std::string& url) {
    std::string v = ValueOf(url);
    if (v.rfind("10.1000/", 0) == 0) return HttpReply{200, RecordFor(v)};
    return HttpReply{200, ErrorBody(v)};
  });
}

TEST(CandidateInputRelationsTest, LiteralPredicatesOnly) {
  auto kb = KbFromText(Publications(10));
  auto c = CandidateInputRelations(kb, Ex("Pub"));
  EXPECT_EQ(c, (std::vector<std::string>{Ex("doi"), Ex("mixed"), Ex("title"), Ex("year")}));
}

TEST(CandidateInputRelationsTest, EmptyClassThrows) {
  auto kb = KbFromText(Publications(3));
  EXPECT_THROW(CandidateInputRelations(kb, Ex("Nothing")), ProbeError);
}

TEST(SampleInputValuesTest, DrawsNpDistinctValues) {
  auto kb = KbFromText(Publications(100));
  auto v = SampleInputValues(kb, Ex("doi"), Ex("Pub"), 25, 7);
  ASSERT_EQ(v.size(), 25u);
  std::set<std::string> distinct(v.begin(), v.end());
  EXPECT_EQ(distinct.size(), 25u);
  for (const auto& x : v) EXPECT_EQ(x.rfind("10.1000/", 0), 0u);
}

TEST(SampleInputValuesTest, FewerEntitiesWarns) {
  auto kb = KbFromText(Publications(10));
  std::vector<std::string> warnings;
  auto v = SampleInputValues(kb, Ex("doi"), Ex("Pub"), 25, 7, &warnings);
  EXPECT_EQ(v.size(), 10u);
  EXPECT_FALSE(warnings.empty());
}

TEST(SampleInputValuesTest, NonUniqueValuesSkipped) {
  auto kb = KbFromText(Publications(50));
  EXPECT_TRUE(SampleInputValues(kb, Ex("year"), Ex("Pub"), 25, 7).empty());
}

TEST(SampleInputValuesTest, Deterministic) {
  auto kb = KbFromText(Publications(100));
  auto a = SampleInputValues(kb, Ex("doi"), Ex("Pub"), 25, 99);
  auto b = SampleInputValues(kb, Ex("doi"), Ex("Pub"), 25, 99);
  auto c = SampleInputValues(kb, Ex("doi"), Ex("Pub"), 25, 100);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(DetectErrorResponsesTest, SixErrorsFourRecords) {
  std::vector<std::string> bodies;
  for (int i = 0; i < 10; ++i) {
    if (i % 5 < 3) bodies.push_back(ErrorBody(fmt::format("10.1000/{:04d}", i)));
    else bodies.push_back(fmt::format(R"({{"title":"Distinct title {}","n":{}}})",
                                      std::string(i * 3, 'q'), i * 1000));
  }
  auto d = DetectErrorResponses(bodies, 0.8);
  ASSERT_TRUE(d.signature_index.has_value());
  EXPECT_EQ(*d.signature_index, 0u);
  EXPECT_EQ(d.removed, (std::vector<size_t>{0, 1, 2, 5, 6, 7}));
  EXPECT_EQ(d.surviving, (std::vector<size_t>{3, 4, 8, 9}));
}

TEST(DetectErrorResponsesTest, AllDistinct) {
  std::vector<std::string> bodies = {"{\"a\":1}", "{\"title\":\"long and different\"}",
                                     "[1,2,3,4,5,6,7,8,9]", "{}"};
  auto d = DetectErrorResponses(bodies, 0.8);
  EXPECT_FALSE(d.error_signature.has_value());
  EXPECT_TRUE(d.removed.empty());
  EXPECT_EQ(d.surviving.size(), 4u);
}

TEST(DetectErrorResponsesTest, AllIdentical) {
  std::vector<std::string> bodies(7, R"({"error":"not found"})");
  auto d = DetectErrorResponses(bodies, 0.8);
  EXPECT_EQ(d.error_signature, bodies[0]);
  EXPECT_EQ(d.removed.size(), 7u);
  EXPECT_TRUE(d.surviving.empty());
}

TEST(DetectErrorResponsesTest, Empty) {
  auto d = DetectErrorResponses({}, 0.8);
  EXPECT_FALSE(d.signature_index.has_value());
  EXPECT_TRUE(d.surviving.empty());
}

TEST(DetectErrorResponsesTest, PartitionInvariant) {
  for (int k = 0; k <= 10; ++k) {
    std::vector<std::string> bodies;
    for (int i = 0; i < 10; ++i) {
      bodies.push_back(i < k ? ErrorBody(std::to_string(i))
                             : fmt::format(R"({{"id":{},"pad":"{}"}})", i, std::string(i * 9, 'z')));
    }
    auto d = DetectErrorResponses(bodies, 0.8);
    EXPECT_EQ(d.removed.size() + d.surviving.size(), bodies.size());
    std::set<size_t> all(d.removed.begin(), d.removed.end());
    all.insert(d.surviving.begin(), d.surviving.end());
    EXPECT_EQ(all.size(), bodies.size());
  }
}

TEST(MatchesErrorSignatureTest, PrefixBounded) {
  std::string sig = ErrorBody("a");
  EXPECT_TRUE(MatchesErrorSignature(ErrorBody("b"), sig, 0.8));
  EXPECT_FALSE(MatchesErrorSignature(R"({"title":"x"})", sig, 0.8));
  std::string long_a = std::string(100, 'x') + std::string(50, 'a');
  std::string long_b = std::string(100, 'x') + std::string(50, 'b');
  EXPECT_TRUE(MatchesErrorSignature(long_a, long_b, 0.99, 100));
  EXPECT_FALSE(MatchesErrorSignature(long_a, long_b, 0.99, 150));
}

TEST(ProbeTest, DoiAcceptedTitleRejected) {
  auto kb = KbFromText(Publications(100));
  auto t = DoiOnlyApi();
  ApiConnector api(TestEndpoint(Ex("Pub")), t);
  ProbeReport r = Probe(kb, api, ProbeOptions{});
  EXPECT_EQ(r.valid_input_relations, std::vector<std::string>{Ex("doi")});
  ASSERT_TRUE(r.error_signature.has_value());
  EXPECT_NE(r.error_signature->find("No record matches"), std::string::npos);

  const RelationProbe* doi = r.Find(Ex("doi"));
  ASSERT_NE(doi, nullptr);
  EXPECT_TRUE(doi->accepted);
  EXPECT_EQ(doi->requests_sent, 25u);
  EXPECT_EQ(doi->valid_responses, 25u);
  const RelationProbe* title = r.Find(Ex("title"));
  ASSERT_NE(title, nullptr);
  EXPECT_FALSE(title->accepted);
  EXPECT_EQ(title->error_responses, 25u);
  EXPECT_EQ(r.Find(Ex("year"))->requests_sent, 0u);
  EXPECT_EQ(r.Find(Ex("nope")), nullptr);
  for (const auto& p : r.relations) {
    EXPECT_EQ(p.valid_responses + p.error_responses + p.http_failures, p.requests_sent)
        << p.relation;
  }
}

TEST(ProbeTest, NotFoundStatusesExcluded) {
  auto kb = KbFromText(Publications(100));
  auto t = std::make_shared<FnTransport>(
      [](const std::string&) { return HttpReply{404, R"({"error":"not found"})"}; });
  ApiConnector api(TestEndpoint(Ex("Pub")), t);
  ProbeReport r = Probe(kb, api, ProbeOptions{});
  EXPECT_TRUE(r.valid_input_relations.empty());
  EXPECT_EQ(r.Find(Ex("doi"))->http_failures, 25u);
}

TEST(ProbeTest, UnparseableBodiesAreErrors) {
  auto kb = KbFromText(Publications(40));
  auto t = std::make_shared<FnTransport>(
      [](const std::string&) { return HttpReply{200, "<html>maintenance</html>"}; });
  ApiConnector api(TestEndpoint(Ex("Pub")), t);
  ProbeReport r = Probe(kb, api, ProbeOptions{});
  EXPECT_TRUE(r.valid_input_relations.empty());
  EXPECT_EQ(r.Find(Ex("doi"))->error_responses, 25u);
}

TEST(ProbeTest, DeadEndpointThrows) {
  auto kb = KbFromText(Publications(30));
  auto t = std::make_shared<FnTransport>(
      [](const std::string&) -> HttpReply { throw TransportError("refused"); });
  ApiConnector api(TestEndpoint(Ex("Pub")), t);
  EXPECT_THROW(Probe(kb, api, ProbeOptions{}), ProbeError);
}

TEST(ProbeTest, MinValidFraction) {
  // Only the first 4 DOIs resolve: enough for ceil(0.04 * 100) = 4, not for 20.
  auto kb = KbFromText(Publications(100));
  auto t = std::make_shared<FnTransport>([](const std::string& url) {
    std::string v = ValueOf(url);
    if (v >= "10.1000/0000" && v <= "10.1000/0003") return HttpReply{200, RecordFor(v)};
    return HttpReply{200, ErrorBody(v)};
  });
  ApiConnector api(TestEndpoint(Ex("Pub")), t);
  ProbeOptions o;
  o.n_p = 100;
  o.min_valid_fraction = 0.04;
  ProbeReport r = Probe(kb, api, o);
  EXPECT_EQ(r.Find(Ex("doi"))->valid_responses, 4u);
  EXPECT_TRUE(r.Find(Ex("doi"))->accepted);
  o.min_valid_fraction = 0.2;
  EXPECT_FALSE(Probe(kb, api, o).Find(Ex("doi"))->accepted);
}

}  // namespace
}  // namespace linkpoint
