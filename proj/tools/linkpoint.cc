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

// Command-line driver: align, identifiers, probe, generate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "linkpoint/aligner.h"
#include "linkpoint/harness.h"
#include "linkpoint/identifier_extractor.h"
#include "linkpoint/kb_store.h"
#include "linkpoint/prober.h"
#include "linkpoint/registry.h"
#include "linkpoint/report.h"
#include "linkpoint/settings.h"

namespace {

using namespace linkpoint;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitEmpty = 2;

struct Common {
  std::string registry = "registry.json";
  std::string settings;
  std::string kb;
  std::string api;
};

GlobalSettings ReadSettings(const Common& c) {
  return c.settings.empty() ? GlobalSettings{} : LoadSettings(c.settings);
}

KnowledgeBase OpenKb(const Registry& reg, const std::string& name) {
  const KbRegistration& r = reg.Kb(name);
  if (!std::filesystem::exists(r.path)) {
    throw ConfigError("KB file not found: " + r.path.string());
  }
  LoadOptions options;
  if (!r.type_predicate.empty()) options.type_predicate = r.type_predicate;
  LoadReport report;
  KnowledgeBase kb = KnowledgeBase::LoadFile(r.path, options, &report);
  if (report.skipped > 0) {
    std::cerr << fmt::format("warning: skipped {} malformed line(s) in {}\n", report.skipped,
                             r.path.string());
  }
  return kb;
}

ApiConnector OpenApi(const Registry& reg, const std::string& name, const KnowledgeBase& kb) {
  const ApiRegistration& r = reg.Api(name);
  if (kb.EntitiesOfClass(r.endpoint.input_class).empty()) {
    throw ConfigError("input class " + r.endpoint.input_class + " has no entities in the KB");
  }
  return ApiConnector(r.endpoint, MakeTransport(r));
}

void WriteFile(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int RunAlign(const Common& c, const std::string& out_path, const std::string& report_path) {
  GlobalSettings settings = ReadSettings(c);
  Registry reg = Registry::Load(c.registry);
  KnowledgeBase kb = OpenKb(reg, c.kb);
  ApiConnector api = OpenApi(reg, c.api, kb);
  AlignmentResult result = RunAlignment(kb, api, settings);
  std::vector<AlignmentEntry> entries = result.Entries();

  const std::string alignment_file = out_path.empty() ? settings.alignment_path : out_path;
  const std::string report_file = report_path.empty() ? settings.report_path : report_path;
  WriteFile(alignment_file, DumpJson(AlignmentToJson(entries)));
  WriteFile(report_file, DumpJson(RunReportToJson(result, settings)));

  std::cout << fmt::format("input relations: {}\n",
                           fmt::join(result.probe.valid_input_relations, ", "));
  PrintSummary(std::cout, entries);
  std::cout << fmt::format("wrote {} and {}\n", alignment_file, report_file);
  return entries.empty() ? kExitEmpty : kExitOk;
}

int RunIdentifiers(const Common& c) {
  GlobalSettings settings = ReadSettings(c);
  Registry reg = Registry::Load(c.registry);
  KnowledgeBase kb = OpenKb(reg, c.kb);
  IdentifierOptions options;
  options.theta_id = settings.theta_id;
  options.min_occurrences = static_cast<size_t>(settings.identifier_min_occurrences);
  IdentifierRelationSet ids = ExtractIdentifierRelations(kb, options);
  for (const auto& r : ids.relations) {
    std::cout << fmt::format("{}\t{:.4f}\t{}/{}\n", r.predicate,
                             r.inverse_functionality.value(), r.inverse_functionality.distinct,
                             r.inverse_functionality.total);
  }
  if (ids.relations.empty()) std::cout << "(no identifier relations)\n";
  return kExitOk;
}

int RunProbe(const Common& c, const std::string& out_path) {
  GlobalSettings settings = ReadSettings(c);
  Registry reg = Registry::Load(c.registry);
  KnowledgeBase kb = OpenKb(reg, c.kb);
  ApiConnector api = OpenApi(reg, c.api, kb);
  ProbeOptions options;
  options.n_p = static_cast<size_t>(settings.n_p);
  options.seed = settings.seed;
  options.theta_err = settings.theta_err;
  options.min_valid_fraction = settings.min_valid_fraction;
  options.error_body_prefix = static_cast<size_t>(settings.error_body_prefix);
  options.workers = static_cast<size_t>(settings.workers);
  ProbeReport report = Probe(kb, api, options);

  for (const auto& r : report.relations) {
    std::cout << fmt::format("{} {}  sent={} valid={} errors={} http_failures={}\n",
                             r.accepted ? "+" : "-", r.relation, r.requests_sent,
                             r.valid_responses, r.error_responses, r.http_failures);
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  if (!out_path.empty()) WriteFile(out_path, DumpJson(ProbeReportToJson(report)));
  return report.valid_input_relations.empty() ? kExitEmpty : kExitOk;
}

int RunGenerate(const std::string& dir, uint64_t seed, size_t entities, bool zero_noise,
                int unknown_status) {
  SyntheticPairConfig config =
      zero_noise ? SyntheticPairConfig::ZeroNoise(seed) : SyntheticPairConfig::Standard(seed);
  config.entity_count = entities;
  config.unknown_key_status = unknown_status;
  SyntheticPair pair = GenerateSyntheticPair(config);
  WriteFixtures(dir, pair);
  std::cout << fmt::format("wrote {} triples, {} responses, {} gold entries to {}\n",
                           pair.kb.size(), pair.api->responses.size(), pair.gold.size(), dir);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discover linkage points between an RDF knowledge base and a JSON Web API"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--registry", common.registry, "Registry of KBs and APIs")
      ->capture_default_str();

  auto add_settings = [&](CLI::App* cmd) {
    cmd->add_option("--settings", common.settings, "Settings JSON file");
  };

  std::string out_path, report_path;
  CLI::App* align = app.add_subcommand("align", "Probe the API and compute the alignment");
  align->add_option("--kb", common.kb, "Registered KB name")->required();
  align->add_option("--api", common.api, "Registered API name")->required();
  add_settings(align);
  align->add_option("--out", out_path, "Alignment output file");
  align->add_option("--report", report_path, "Run report output file");

  CLI::App* identifiers = app.add_subcommand("identifiers", "List identifier relations");
  identifiers->add_option("--kb", common.kb, "Registered KB name")->required();
  add_settings(identifiers);

  CLI::App* probe = app.add_subcommand("probe", "Find valid input relations");
  probe->add_option("--kb", common.kb, "Registered KB name")->required();
  probe->add_option("--api", common.api, "Registered API name")->required();
  add_settings(probe);
  probe->add_option("--out", out_path, "Probe report output file");

  std::string gen_dir;
  uint64_t gen_seed = 1;
  size_t gen_entities = 200;
  bool gen_zero = false;
  int gen_unknown = 200;
  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic KB/API fixture pair");
  generate->add_option("--out", gen_dir, "Output directory")->required();
  generate->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  generate->add_option("--entities", gen_entities, "Publications to generate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_flag("--zero-noise", gen_zero, "Disable all response noise");
  generate->add_option("--unknown-status", gen_unknown, "Status for unknown keys")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*align) return RunAlign(common, out_path, report_path);
    if (*identifiers) return RunIdentifiers(common);
    if (*probe) return RunProbe(common, out_path);
    if (*generate) return RunGenerate(gen_dir, gen_seed, gen_entities, gen_zero, gen_unknown);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
