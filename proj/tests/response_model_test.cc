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

#include "linkpoint/response_model.h"

#include <algorithm>
#include <map>

#include <gtest/gtest.h>

namespace linkpoint {
namespace {

constexpr char kFig1[] = R"({
  "label": "Some example Title",
  "doi": "10.1145/5550123.5550456",
  "authors": [
    {"name": "Martin Brenner", "affiliation": "Example University"},
    {"name": "Katrin Haas", "affiliation": "Example University"}
  ],
  "facets": [
    {"type": "year", "value": "2020"},
    {"type": "genre", "value": "Computer Science"}
  ]
})";

std::map<std::string, std::string> AsMap(const std::vector<PathValuePair>& pairs) {
  std::map<std::string, std::string> out;
  for (const auto& p : pairs) out[p.path.ToString()] = p.value.text;
  return out;
}

size_t OracleLeafCount(const nlohmann::json& j) {
  if (j.is_object() || j.is_array()) {
    size_t n = 0;
    for (const auto& child : j) n += OracleLeafCount(child);
    return n;
  }
  return 1;
}

TEST(ResponseParse, ObjectRoot) {
  ResponseTree tree = ParseResponse(R"({"label":"T"})");
  EXPECT_TRUE(tree.root().is_object());
  auto pairs = Flatten(tree);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].path.ToString(), "label");
  EXPECT_EQ(pairs[0].value.kind, LeafKind::kString);
  EXPECT_EQ(pairs[0].value.text, "T");
}

TEST(ResponseParse, Fig1AuthorsLeaf) {
  auto pairs = AsMap(Flatten(ParseResponse(kFig1)));
  EXPECT_EQ(pairs.at("authors.0.name"), "Martin Brenner");
  EXPECT_EQ(pairs.at("facets.1.value"), "Computer Science");
}

TEST(ResponseParse, ArrayAndScalarRoots) {
  auto pairs = Flatten(ParseResponse("[1,2]"));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].path.ToString(), "0");
  EXPECT_EQ(pairs[0].path.segments[0].kind, SegmentKind::kIndex);
  EXPECT_EQ(pairs[1].value.text, "2");
  EXPECT_EQ(pairs[1].value.kind, LeafKind::kNumber);

  auto scalar = Flatten(ParseResponse("\"just text\""));
  ASSERT_EQ(scalar.size(), 1u);
  EXPECT_EQ(scalar[0].path.length(), 0u);
  EXPECT_EQ(scalar[0].value.text, "just text");
}

TEST(ResponseParse, MalformedCarriesOffset) {
  try {
    ParseResponse(R"({"a": 1,, "b": 2})");
    FAIL() << "expected UnparseableResponse";
  } catch (const UnparseableResponse& e) {
    EXPECT_GE(e.offset(), 8u);
    EXPECT_LE(e.offset(), 10u);
  }
  EXPECT_THROW(ParseResponse(""), UnparseableResponse);
  EXPECT_THROW(ParseResponse("<html>error</html>"), UnparseableResponse);
}

TEST(ResponseFlatten, NestedObject) {
  auto pairs = AsMap(Flatten(ParseResponse(R"({"a":{"b":1}})")));
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs.at("a.b"), "1");
}

TEST(ResponseFlatten, ArrayOfObjects) {
  auto pairs = AsMap(Flatten(ParseResponse(R"({"authors":[{"name":"X"},{"name":"Y"}]})")));
  EXPECT_EQ(pairs, (std::map<std::string, std::string>{{"authors.0.name", "X"},
                                                       {"authors.1.name", "Y"}}));
}

TEST(ResponseFlatten, LeafKinds) {
  auto pairs = Flatten(ParseResponse(R"({"s":"x","n":2.5,"i":-3,"t":true,"z":null,"e":[],"o":{}})"));
  std::map<std::string, LeafValue> by_path;
  for (const auto& p : pairs) by_path[p.path.ToString()] = p.value;
  EXPECT_EQ(by_path.size(), 5u);  // empty containers have no leaves
  EXPECT_EQ(by_path["n"].kind, LeafKind::kNumber);
  EXPECT_EQ(by_path["n"].text, "2.5");
  EXPECT_EQ(by_path["i"].text, "-3");
  EXPECT_EQ(by_path["t"].kind, LeafKind::kBoolean);
  EXPECT_EQ(by_path["t"].text, "true");
  EXPECT_EQ(by_path["z"].kind, LeafKind::kNull);
  EXPECT_EQ(by_path["z"].text, "");
}

TEST(ResponseFlatten, DeepFixtureMatchesLeafCountOracle) {
  const char* deep = R"({"l1":{"l2":[{"l3":{"l4":[1,2,{"l5":"x","m":[true,null]}]}},"y",[[]]],
                        "k":{"0":{"1":"numeric keys"}}},"top":[{"a":1},{"a":2,"b":{"c":[3,4]}}]})";
  ResponseTree tree = ParseResponse(deep);
  EXPECT_EQ(Flatten(tree).size(), OracleLeafCount(tree.root()));
  EXPECT_EQ(tree.LeafCount(), OracleLeafCount(tree.root()));
}

TEST(ResponseFlatten, DuplicateValuesKeptAtDistinctPaths) {
  auto pairs = Flatten(ParseResponse(R"({"year":2020,"refs":[{"year":2020}]})"));
  EXPECT_EQ(pairs.size(), 2u);
}

TEST(ResponseGeneralize, Examples) {
  auto g = Generalize(ParseResponsePath("authors.0.name"));
  EXPECT_EQ(g.ToString(), "authors.*.name");
  EXPECT_EQ(g.branch_count(), 1u);
  EXPECT_EQ(Generalize(ParseResponsePath("label")).ToString(), "label");
  auto f = Generalize(ParseResponsePath("facets.1.value"));
  EXPECT_EQ(f.ToString(), "facets.*.value");
  EXPECT_EQ(f.branch_count(), 1u);
}

TEST(ResponseGeneralize, NumericObjectKeysStayConcrete) {
  auto pairs = Flatten(ParseResponse(R"({"k":{"0":"a"},"arr":["b"]})"));
  std::map<std::string, std::string> generalized;
  for (const auto& p : pairs) generalized[Generalize(p.path).ToString()] = p.value.text;
  EXPECT_EQ(generalized.at("k.0"), "a");
  EXPECT_EQ(generalized.at("arr.*"), "b");
}

TEST(ResponseGeneralize, IdempotentAndLengthPreserving) {
  for (const auto& p : Flatten(ParseResponse(kFig1))) {
    ResponsePath once = Generalize(p.path);
    EXPECT_EQ(Generalize(once), once);
    EXPECT_EQ(once.length(), p.path.length());
  }
}

TEST(ResponsePathLength, CountsWildcards) {
  EXPECT_EQ(PathLength(ParseResponsePath("label")), 1u);
  EXPECT_EQ(PathLength(ParseResponsePath("authors.*.name")), 3u);
  EXPECT_EQ(PathLength(ParseResponsePath("facets.*.value")), 3u);
}

TEST(ResponseReplay, ReachesStoredLeaf) {
  ResponseTree tree = ParseResponse(kFig1);
  for (const auto& p : Flatten(tree)) {
    const nlohmann::json* node = Replay(tree, p.path);
    ASSERT_NE(node, nullptr) << p.path.ToString();
    EXPECT_FALSE(node->is_structured());
  }
  EXPECT_EQ(Replay(tree, ParseResponsePath("authors.7.name")), nullptr);
  EXPECT_EQ(Replay(tree, ParseResponsePath("label.x")), nullptr);
}

}  // namespace
}  // namespace linkpoint
