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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "linkpoint/harness.h"
#include "linkpoint/registry.h"
#include "linkpoint/settings.h"

namespace linkpoint {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

TEST(SettingsTest, EmptyDocumentKeepsDefaults) {
  GlobalSettings s = ParseSettings(json::object());
  EXPECT_EQ(s, GlobalSettings{});
  EXPECT_DOUBLE_EQ(s.theta_id, 0.99);
  EXPECT_DOUBLE_EQ(s.theta_str, 0.5);
  EXPECT_DOUBLE_EQ(s.theta_rec, 0.1);
  EXPECT_DOUBLE_EQ(s.theta_err, 0.8);
  EXPECT_EQ(s.n_p, 25);
  EXPECT_EQ(s.n_r, 75);
  EXPECT_EQ(s.max_depth, 3);
}

TEST(SettingsTest, OverridesOneKey) {
  GlobalSettings s = ParseSettings(json::parse(R"({"theta_rec":0.3})"));
  EXPECT_DOUBLE_EQ(s.theta_rec, 0.3);
  GlobalSettings expected;
  expected.theta_rec = 0.3;
  EXPECT_EQ(s, expected);
}

TEST(SettingsTest, ErrorsNameTheKey) {
  struct Case {
    const char* doc;
    const char* key;
  };
  for (const Case& c : {Case{R"({"theta_str":1.5})", "theta_str"},
                        Case{R"({"theta_rec":-0.1})", "theta_rec"},
                        Case{R"({"n_p":"many"})", "n_p"},
                        Case{R"({"n_r":-1})", "n_r"},
                        Case{R"({"max_depth":0})", "max_depth"},
                        Case{R"({"thetaa_str":0.5})", "thetaa_str"}}) {
    try {
      ParseSettings(json::parse(c.doc));
      ADD_FAILURE() << "accepted " << c.doc;
    } catch (const SettingsError& e) {
      EXPECT_EQ(e.key(), c.key) << c.doc;
      EXPECT_NE(std::string(e.what()).find(c.key), std::string::npos);
    }
  }
  EXPECT_THROW(ParseSettings(json::array()), SettingsError);
}

TEST(SettingsTest, RoundTrip) {
  GlobalSettings s;
  s.theta_str = 0.65;
  s.n_r = 10;
  s.seed = 123456789012345ULL;
  s.alignment_path = "out/a.json";
  EXPECT_EQ(ParseSettings(SettingsToJson(s)), s);
  EXPECT_EQ(ParseSettings(SettingsToJson(GlobalSettings{})), GlobalSettings{});
}

TEST(SettingsTest, LoadFile) {
  fs::path p = fs::temp_directory_path() / "linkpoint_settings_test.json";
  std::ofstream(p) << R"({"n_p": 5})";
  EXPECT_EQ(LoadSettings(p).n_p, 5);
  std::ofstream(p) << "{not json";
  EXPECT_THROW(LoadSettings(p), SettingsError);
  fs::remove(p);
  EXPECT_THROW(LoadSettings(p), SettingsError);
}

TEST(RegistryTest, ParsesAndResolvesPaths) {
  json j = json::parse(R"({
    "kbs": {"k": {"path": "data/kb.nt"}},
    "apis": {"a": {"url": "https://x.org/q={value}", "input_class": "http://ex.org/C",
                   "rate_limit_ms": 100, "max_retries": 1,
                   "headers": {"X-Key": "secret"}, "replay_dir": "rec"}}})");
  Registry r = Registry::FromJson(j, "/base");
  EXPECT_EQ(r.Kb("k").path, fs::path("/base/data/kb.nt"));
  const ApiRegistration& a = r.Api("a");
  EXPECT_EQ(a.endpoint.name, "a");
  EXPECT_EQ(a.endpoint.rate_limit, std::chrono::milliseconds(100));
  EXPECT_EQ(a.endpoint.max_retries, 1);
  ASSERT_EQ(a.endpoint.headers.size(), 1u);
  EXPECT_EQ(a.endpoint.headers[0].first, "X-Key");
  EXPECT_EQ(a.replay_dir, fs::path("/base/rec"));
  EXPECT_THROW(r.Kb("missing"), ConfigError);
  EXPECT_THROW(r.Api("missing"), ConfigError);
}

TEST(RegistryTest, RejectsBadEntries) {
  for (const char* doc : {
           R"({"apis": {"a": {"url": "https://x.org/q", "input_class": "C"}}})",
           R"({"apis": {"a": {"url": "https://x.org/{value}"}}})",
           R"({"apis": {"a": {"url": "https://x.org/{value}", "input_class": "C", "bogus": 1}}})",
           R"({"kbs": {"k": {}}})",
           R"({"kbs": []})",
           R"({"other": {}})",
       }) {
    EXPECT_THROW(Registry::FromJson(json::parse(doc), "/"), ConfigError) << doc;
  }
  EXPECT_THROW(Registry::Load("/nonexistent/registry.json"), ConfigError);
}

// CLI end to end on generated fixtures.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    // ctest runs each test case in its own process, possibly in parallel.
    dir_ = new fs::path(fs::temp_directory_path() /
                        ("linkpoint_cli_test_" + std::to_string(::getpid())));
    fs::remove_all(*dir_);
    auto config = SyntheticPairConfig::ZeroNoise(21);
    config.entity_count = 120;
    WriteFixtures(*dir_, GenerateSyntheticPair(config));

    // An API whose every answer is the error template, and one nobody serves.
    fs::create_directories(*dir_ / "dead_api");
    std::ofstream(*dir_ / "dead_api" / "index.json")
        << json{{"url_template", "http://api.synthetic.test/records?q={value}"},
                {"input_class", synth::kPublication},
                {"unknown_status", 200},
                {"responses", json::object()}}
               .dump();
    std::ifstream in(*dir_ / "registry.json");
    json reg = json::parse(in);
    reg["apis"]["errors"] = reg["apis"]["synthetic"];
    reg["apis"]["errors"]["replay_dir"] = "dead_api";
    reg["apis"]["offline"] = {{"url", "http://127.0.0.1:9/q?v={value}"},
                              {"input_class", synth::kPublication},
                              {"timeout_ms", 300},
                              {"max_retries", 0}};
    reg["kbs"]["gone"] = {{"path", "no_such.nt"}};
    std::ofstream(*dir_ / "no_ids.nt")
        << "<http://ex.org/a> <http://ex.org/p> \"same\" .\n"
           "<http://ex.org/b> <http://ex.org/p> \"same\" .\n";
    reg["kbs"]["plain"] = {{"path", "no_ids.nt"}};
    std::ofstream(*dir_ / "registry.json") << reg.dump(2);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }

  struct Result {
    int code;
    std::string out;
  };

  static Result Run(const std::string& args) {
    fs::path out = *dir_ / "stdout.txt";
    std::string cmd = "cd " + dir_->string() + " && " + LINKPOINT_CLI + " --registry registry.json " +
                      args + " > " + out.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text.str()};
  }

  static std::string Slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, AlignWritesAlignmentAndReport) {
  Result r = Run("align --kb synthetic --api synthetic --out a1.json --report r1.json");
  ASSERT_EQ(r.code, 0) << r.out;
  json alignment = json::parse(Slurp(*dir_ / "a1.json"));
  ASSERT_TRUE(alignment.is_array());
  // Both input relations (doi, title) recover the same eight linkage points.
  EXPECT_EQ(alignment.size(), 16u);
  std::set<std::string> distinct;
  for (const auto& e : alignment) distinct.insert(e["kb_path"].dump() + e["api_path"].get<std::string>());
  EXPECT_EQ(distinct.size(), 8u);
  for (const auto& e : alignment) {
    for (const char* k : {"input_relation", "kb_path", "api_path", "kind", "method", "confidence"}) {
      EXPECT_TRUE(e.contains(k)) << k;
    }
  }
  json report = json::parse(Slurp(*dir_ / "r1.json"));
  EXPECT_TRUE(report.contains("probe"));
  EXPECT_TRUE(report.contains("settings"));
  EXPECT_NE(r.out.find("input relations:"), std::string::npos);
}

TEST_F(CliTest, AlignIsDeterministic) {
  ASSERT_EQ(Run("align --kb synthetic --api synthetic --out d1.json --report dr1.json").code, 0);
  ASSERT_EQ(Run("align --kb synthetic --api synthetic --out d2.json --report dr2.json").code, 0);
  EXPECT_EQ(Slurp(*dir_ / "d1.json"), Slurp(*dir_ / "d2.json"));
}

TEST_F(CliTest, AlignSettingsFile) {
  std::ofstream(*dir_ / "settings.json")
      << R"({"alignment_path": "from_settings.json", "report_path": "rep.json", "n_r": 30})";
  Result r = Run("align --kb synthetic --api synthetic --settings settings.json");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(*dir_ / "from_settings.json"));
  std::ofstream(*dir_ / "bad_settings.json") << R"({"theta_str": 1.5})";
  Result bad = Run("align --kb synthetic --api synthetic --settings bad_settings.json");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("theta_str"), std::string::npos) << bad.out;
}

TEST_F(CliTest, AlignFailures) {
  Result unknown = Run("align --kb synthetic --api nosuch");
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.out.find("nosuch"), std::string::npos) << unknown.out;
  EXPECT_EQ(Run("align --kb synthetic --api errors --out e.json --report er.json").code, 2);
  EXPECT_EQ(Run("align --kb gone --api synthetic").code, 1);
  EXPECT_NE(Run("align --kb synthetic").code, 0);  // missing --api
}

TEST_F(CliTest, Identifiers) {
  Result r = Run("identifiers --kb synthetic");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find(synth::Predicate("doi")), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find(synth::Predicate("year")), std::string::npos) << r.out;
  Result plain = Run("identifiers --kb plain");
  EXPECT_EQ(plain.code, 0);
  EXPECT_NE(plain.out.find("no identifier relations"), std::string::npos);
  EXPECT_EQ(Run("identifiers --kb gone").code, 1);
}

TEST_F(CliTest, Probe) {
  Result r = Run("probe --kb synthetic --api synthetic --out p.json");
  ASSERT_EQ(r.code, 0) << r.out;
  json probe = json::parse(Slurp(*dir_ / "p.json"));
  std::vector<std::string> r_in = probe["valid_input_relations"];
  EXPECT_EQ(r_in, (std::vector<std::string>{synth::Predicate("doi"), synth::Predicate("title")}));
  EXPECT_EQ(Run("probe --kb synthetic --api errors").code, 2);
  Result dead = Run("probe --kb synthetic --api offline");
  EXPECT_EQ(dead.code, 1);
  EXPECT_NE(dead.out.find("error:"), std::string::npos);
}

TEST_F(CliTest, Generate) {
  Result r = Run("generate --out gen --seed 4 --entities 30 --zero-noise");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(*dir_ / "gen" / "kb.nt"));
  EXPECT_TRUE(fs::exists(*dir_ / "gen" / "registry.json"));
  EXPECT_EQ(LoadGold(*dir_ / "gen" / "gold.json").size(), 8u);
}

}  // namespace
}  // namespace linkpoint
