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

#ifdef LINKPOINT_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "linkpoint/harness.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <httplib.h>

#include "linkpoint/random.h"
#include "linkpoint/report.h"

namespace linkpoint {

namespace synth {
std::string Predicate(std::string_view local) { return kSchema + std::string(local); }
}  // namespace synth

namespace {

constexpr char kXsdGYear[] = "http://www.w3.org/2001/XMLSchema#gYear";
constexpr char kXsdAnyUri[] = "http://www.w3.org/2001/XMLSchema#anyURI";
constexpr char kPubBase[] = "https://kb.example.org/pub/";
constexpr char kPersonBase[] = "https://kb.example.org/person/";
constexpr char kListBase[] = "https://kb.example.org/list/";

const std::vector<std::string> kFirstNames = {
    "Martin", "Katrin", "Anna", "Maria", "Peter", "Julia", "Thomas", "Laura", "Michael", "Sarah",
    "Daniel", "Lena", "Stefan", "Eva", "Markus", "Nina", "Andreas", "Clara", "Jan", "Sophie",
    "Felix", "Hannah", "Lukas", "Paula", "David", "Mira", "Simon", "Emma", "Jonas", "Ida"};
const std::vector<std::string> kLastNames = {
    "Brenner", "Haas", "Becker", "Hoffmann", "Schulz", "Keller", "Wagner", "Fischer",
    "Weber", "Meyer", "Richter", "Klein", "Wolf", "Neumann", "Schwarz", "Zimmermann",
    "Braun", "Kruger", "Hartmann", "Lange", "Werner", "Krause", "Lehmann", "Koch",
    "Bauer", "Franke", "Albrecht", "Vogel", "Seidel", "Ludwig"};
const std::vector<std::string> kTitleWords = {
    "adaptive", "alignment", "analysis", "approach", "approximate", "bibliographic", "caching",
    "clustering", "complex", "data", "databases", "deep", "detection", "discovery",
    "distributed", "dynamic", "efficient", "embeddings", "entity", "evaluation", "events",
    "extraction", "federated", "graph", "graphs", "heterogeneous", "incremental", "indexing",
    "inference", "integration", "knowledge", "large", "learning", "linked", "matching",
    "metadata", "methods", "mining", "models", "networks", "ontology", "open", "optimization",
    "parallel", "patterns", "probabilistic", "processing", "queries", "query", "ranking",
    "reasoning", "records", "resolution", "retrieval", "robust", "scalable", "schema",
    "search", "semantic", "similarity", "sources", "sparse", "streams", "structured",
    "systems", "temporal", "towards", "uncertain", "web", "workflows"};
const std::vector<std::string> kJournals = {
    "Journal on Data Semantics", "Information Systems", "Data and Knowledge Engineering",
    "The VLDB Journal", "Knowledge and Information Systems", "Semantic Web",
    "Journal of Web Semantics", "World Wide Web", "Distributed and Parallel Databases",
    "Information Retrieval Journal", "Journal of Intelligent Information Systems",
    "Datenbank-Spektrum", "International Journal on Digital Libraries", "Scientometrics",
    "Computing", "Acta Informatica"};
const std::vector<std::string> kGenres = {"Article", "Chapter", "ConferencePaper", "Editorial",
                                          "Review"};
const std::vector<std::string> kAffiliations = {
    "University of Mannheim", "TU Dresden", "University of Bonn",
    "ETH Zurich", "University of Oxford", "KIT Karlsruhe", "University of Vienna",
    "TU Munich", "Leipzig University", "University of Amsterdam", "Aalto University"};

std::string RandomTitle(Rng& rng) {
  size_t n = 5 + static_cast<size_t>(rng.Below(5));
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    std::string w = rng.Pick(kTitleWords);
    if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// Same title with one word swapped out: what a search-style API returns for
// a near miss.
std::string SimilarTitle(Rng& rng, const std::string& title) {
  std::vector<std::string> words;
  std::istringstream in(title);
  for (std::string w; in >> w;) words.push_back(w);
  size_t i = static_cast<size_t>(rng.Below(words.size()));
  std::string replacement;
  do {
    replacement = rng.Pick(kTitleWords);
    if (i == 0) {
      replacement[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
    }
  } while (replacement == words[i]);
  words[i] = replacement;
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

std::string RandomDigits(Rng& rng, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += static_cast<char>('0' + rng.Below(10));
  return out;
}

std::string RandomDoi(Rng& rng) {
  return fmt::format("10.1007/s{}-{}-{}-{}", RandomDigits(rng, 5), RandomDigits(rng, 3),
                     RandomDigits(rng, 5), static_cast<char>('a' + rng.Below(26)));
}

std::string RandomPages(Rng& rng) {
  uint64_t start = 1 + rng.Below(400);
  return fmt::format("{}-{}", start, start + 5 + rng.Below(25));
}

std::string RandomToken(Rng& rng) {
  std::string out;
  for (int i = 0; i < 8; ++i) out += static_cast<char>('a' + rng.Below(26));
  return out;
}

std::string Abbreviate(const std::string& name) {
  auto space = name.find(' ');
  if (space == std::string::npos || space == 0) return name;
  return name.substr(0, 1) + ". " + name.substr(space + 1);
}

std::string ReformatDoi(Rng& rng, const std::string& doi) {
  if (rng.Bernoulli(0.5)) {
    std::string out = doi;
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
  }
  std::string out;
  for (char c : doi) {
    if (c != '-') out += c;
  }
  return out;
}

struct Publication {
  std::string title;
  std::string doi;
  int year = 2000;
  std::string genre;
  std::string journal;
  std::string pages;
  std::vector<size_t> authors;  // person indices
};

std::string IssnFor(const std::string& journal) {
  Rng rng = Rng::Derive(0, "issn:" + journal);
  return RandomDigits(rng, 4) + "-" + RandomDigits(rng, 4);
}

// `noise` drives per-key perturbations; `content` fills the record's own
// fields, so every key of one entity sees the same underlying record.
nlohmann::json BuildRecord(Rng& noise, Rng content, const SyntheticPairConfig& config,
                           const Publication& pub, const std::vector<std::string>& author_names,
                           bool reformat) {
  const StructureTemplate& st = config.structure;
  nlohmann::json rec = nlohmann::json::object();
  rec["label"] = pub.title;
  rec["doi"] = reformat ? ReformatDoi(noise, pub.doi) : pub.doi;
  rec["url"] = "https://doi.org/" + pub.doi;
  rec["pages"] = pub.pages;
  nlohmann::json authors = nlohmann::json::array();
  for (const auto& name : author_names) {
    std::string shown = noise.Bernoulli(config.name_abbreviation) ? Abbreviate(name) : name;
    authors.push_back({{"name", shown}, {"affiliation", content.Pick(kAffiliations)}});
  }
  rec["authors"] = authors;
  if (st.facets) {
    rec["facets"] = nlohmann::json::array(
        {{{"type", "year"}, {"value", std::to_string(pub.year)}},
         {{"type", "genre"}, {"value", pub.genre}}});
  } else {
    rec["issued"] = {{"year", std::to_string(pub.year)}};
    rec["genre"] = pub.genre;
  }
  if (st.venue_object) {
    rec["venue"] = {{"title", pub.journal}, {"issn", IssnFor(pub.journal)}};
  } else {
    rec["journal"] = pub.journal;
  }
  if (st.references) {
    nlohmann::json refs = nlohmann::json::array();
    size_t n = static_cast<size_t>(content.Below(static_cast<uint64_t>(st.references_max) + 1));
    for (size_t i = 0; i < n; ++i) {
      refs.push_back({{"title", RandomTitle(content)}, {"year", 1980 + content.Below(40)}});
    }
    rec["references"] = refs;
  }
  for (size_t i = 0; i < config.extra_leaf_count; ++i) {
    rec[fmt::format("x_tag_{}", i)] = RandomToken(content);
  }
  return rec;
}

void ValidateConfig(const SyntheticPairConfig& c) {
  for (double p : {c.name_abbreviation, c.identifier_reformat, c.wrong_record, c.error_response}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probability outside [0,1]");
  }
  if (c.entity_count < 1) throw std::invalid_argument("entity_count must be >= 1");
  const StructureTemplate& st = c.structure;
  if (st.authors_min < 1 || st.authors_max < st.authors_min) {
    throw std::invalid_argument("authors_min/authors_max out of range");
  }
  if (st.references_max < 0) throw std::invalid_argument("references_max must be >= 0");
  for (const auto& key : c.key_relations) {
    if (key != "doi" && key != "title") {
      throw std::invalid_argument("unsupported key relation '" + key + "'");
    }
  }
}

std::string Lit(const std::string& lexical, const std::string& datatype = {}) {
  return FormatNTriplesTerm(Term::Literal(lexical, datatype));
}

std::string Iri(const std::string& iri) { return FormatNTriplesTerm(Term::Iri(iri)); }

}  // namespace

SyntheticPairConfig SyntheticPairConfig::Standard(uint64_t seed) {
  SyntheticPairConfig c;
  c.seed = seed;
  return c;
}

SyntheticPairConfig SyntheticPairConfig::ZeroNoise(uint64_t seed) {
  SyntheticPairConfig c;
  c.seed = seed;
  c.name_abbreviation = 0.0;
  c.identifier_reformat = 0.0;
  c.wrong_record = 0.0;
  c.error_response = 0.0;
  return c;
}

std::string SyntheticErrorBody(const std::string& query) {
  nlohmann::json body = {
      {"query", query},
      {"status", "error"},
      {"code", "NOT_FOUND"},
      {"message",
       "Sorry, no results were found for the given query. Please check the spelling of the "
       "identifier or title and try again."},
      {"result", nlohmann::json::array()},
      {"total", 0},
      {"took_ms", 3},
      {"api_version", "2.1.0"},
      {"documentation", "https://api.example.org/docs/search#query-syntax"},
      {"hint", "Identifiers must be registered DOIs and titles must match an indexed record."},
  };
  return body.dump();
}

HttpReply MockApi::Lookup(const std::string& value) const {
  auto it = responses.find(value);
  if (it != responses.end()) return it->second;
  if (unknown_status == 200) return {200, SyntheticErrorBody(value)};
  return {unknown_status, R"({"error":"not found"})"};
}

ApiEndpoint MockApi::Endpoint(std::string name) const {
  ApiEndpoint e;
  e.name = std::move(name);
  e.url_template = url_template;
  e.input_class = input_class;
  e.timeout = std::chrono::milliseconds(2000);
  e.max_retries = 0;
  return e;
}

SyntheticPair GenerateSyntheticPair(const SyntheticPairConfig& config) {
  ValidateConfig(config);
  const StructureTemplate& st = config.structure;
  Rng rng = Rng::Derive(config.seed, "kb");

  std::vector<std::string> people((config.entity_count * 3 + 1) / 2);
  for (auto& name : people) name = rng.Pick(kFirstNames) + " " + rng.Pick(kLastNames);

  std::set<std::string> titles, dois;
  std::vector<Publication> pubs(config.entity_count);
  for (auto& pub : pubs) {
    do pub.title = RandomTitle(rng);
    while (!titles.insert(pub.title).second);
    do pub.doi = RandomDoi(rng);
    while (!dois.insert(pub.doi).second);
    pub.year = 1990 + static_cast<int>(rng.Below(32));
    pub.genre = rng.Pick(kGenres);
    pub.journal = rng.Pick(kJournals);
    pub.pages = RandomPages(rng);
    size_t n_authors = static_cast<size_t>(
        st.authors_min + static_cast<int>(rng.Below(st.authors_max - st.authors_min + 1)));
    std::set<size_t> chosen;
    while (chosen.size() < std::min(n_authors, people.size())) {
      size_t p = static_cast<size_t>(rng.Below(people.size()));
      if (chosen.insert(p).second) pub.authors.push_back(p);
    }
  }

  const std::string type = Iri(std::string(kRdfType));
  std::ostringstream nt;
  for (size_t i = 0; i < pubs.size(); ++i) {
    const Publication& pub = pubs[i];
    const std::string s = Iri(kPubBase + std::to_string(i));
    auto emit = [&](const std::string& subj, const char* pred, const std::string& obj) {
      nt << subj << ' ' << Iri(synth::Predicate(pred)) << ' ' << obj << " .\n";
    };
    nt << s << ' ' << type << ' ' << Iri(synth::kPublication) << " .\n";
    emit(s, "title", Lit(pub.title));
    emit(s, "doi", Lit(pub.doi));
    emit(s, "year", Lit(std::to_string(pub.year), kXsdGYear));
    emit(s, "genre", Lit(pub.genre));
    emit(s, "journal", Lit(pub.journal));
    emit(s, "pages", Lit(pub.pages));
    emit(s, "ee", Lit("https://doi.org/" + pub.doi, kXsdAnyUri));
    const std::string list = Iri(kListBase + std::to_string(i));
    emit(s, "creatorList", list);
    for (size_t p : pub.authors) emit(list, "member", Iri(kPersonBase + std::to_string(p)));
  }
  for (size_t p = 0; p < people.size(); ++p) {
    const std::string s = Iri(kPersonBase + std::to_string(p));
    nt << s << ' ' << type << ' ' << Iri(synth::kPerson) << " .\n";
    nt << s << ' ' << Iri(synth::Predicate("name")) << ' ' << Lit(people[p]) << " .\n";
  }

  auto api = std::make_shared<MockApi>();
  api->url_template = "http://api.synthetic.test/records?q={value}";
  api->input_class = synth::kPublication;
  api->unknown_status = config.unknown_key_status;
  for (size_t i = 0; i < pubs.size(); ++i) {
    const Publication& pub = pubs[i];
    for (const auto& key : config.key_relations) {
      const std::string value = key == "doi" ? pub.doi : pub.title;
      Rng noise = Rng::Derive(config.seed, fmt::format("response:{}:{}", i, key));
      if (noise.Bernoulli(config.error_response)) {
        api->responses[value] = {200, SyntheticErrorBody(value)};
        continue;
      }
      nlohmann::json record;
      if (noise.Bernoulli(config.wrong_record)) {
        Publication fake;
        fake.title = SimilarTitle(noise, pub.title);
        fake.doi = RandomDoi(noise);
        fake.year = 1990 + static_cast<int>(noise.Below(32));
        fake.genre = noise.Pick(kGenres);
        fake.journal = noise.Pick(kJournals);
        fake.pages = RandomPages(noise);
        std::vector<std::string> names;
        for (size_t k = 0; k < pub.authors.size(); ++k) {
          names.push_back(noise.Pick(kFirstNames) + " " + noise.Pick(kLastNames));
        }
        record = BuildRecord(noise, Rng(noise.Next()), config, fake, names, false);
      } else {
        std::vector<std::string> names;
        for (size_t p : pub.authors) names.push_back(people[p]);
        bool reformat = noise.Bernoulli(config.identifier_reformat);
        record = BuildRecord(noise, Rng::Derive(config.seed, fmt::format("record:{}", i)), config,
                             pub, names, reformat);
      }
      api->responses[value] = {200, record.dump()};
    }
  }

  auto hop = [](const char* local) { return PathHop{synth::Predicate(local), Direction::kForward}; };
  std::vector<GoldEntry> gold = {
      {{hop("title")}, "label", MatchKind::kFixedPath},
      {{hop("doi")}, "doi", MatchKind::kFixedPath},
      {{hop("ee")}, "url", MatchKind::kFixedPath},
      {{hop("pages")}, "pages", MatchKind::kFixedPath},
      {{hop("journal")}, st.venue_object ? "venue.title" : "journal", MatchKind::kFixedPath},
      {{hop("year")}, st.facets ? "facets.0.value" : "issued.year", MatchKind::kFixedPath},
      {{hop("genre")}, st.facets ? "facets.1.value" : "genre", MatchKind::kFixedPath},
  };
  if (st.authors_max >= 2) {
    gold.push_back({{hop("creatorList"), hop("member"), hop("name")}, "authors.*.name",
                    MatchKind::kBranchingPoint});
  } else {
    gold.push_back({{hop("creatorList"), hop("member"), hop("name")}, "authors.0.name",
                    MatchKind::kFixedPath});
  }

  SyntheticPair pair;
  pair.config = config;
  pair.ntriples = nt.str();
  std::istringstream in(pair.ntriples);
  pair.kb = KnowledgeBase::Load(in);
  pair.api = std::move(api);
  pair.gold = std::move(gold);
  return pair;
}

std::optional<std::string> ExtractTemplateValue(const std::string& url_template,
                                                const std::string& url) {
  auto pos = url_template.find(kValuePlaceholder);
  if (pos == std::string::npos) return std::nullopt;
  std::string_view prefix(url_template.data(), pos);
  std::string_view suffix(url_template.data() + pos + kValuePlaceholder.size(),
                          url_template.size() - pos - kValuePlaceholder.size());
  if (url.size() < prefix.size() + suffix.size()) return std::nullopt;
  std::string_view u(url);
  if (u.substr(0, prefix.size()) != prefix) return std::nullopt;
  if (u.substr(u.size() - suffix.size()) != suffix) return std::nullopt;
  return PercentDecode(u.substr(prefix.size(), u.size() - prefix.size() - suffix.size()));
}

HttpReply MockTransport::Get(const HttpRequest& request) {
  calls_.fetch_add(1);
  auto value = ExtractTemplateValue(api_->url_template, request.url);
  if (!value) return {400, R"({"error":"bad request"})"};
  return api_->Lookup(*value);
}

nlohmann::json GoldToJson(const std::vector<GoldEntry>& gold) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gold) {
    arr.push_back({{"kb_path", KbPathToJson(g.kb_path)},
                   {"api_path", g.api_path},
                   {"kind", std::string(MatchKindName(g.kind))}});
  }
  return arr;
}

std::vector<GoldEntry> LoadGold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<GoldEntry> out;
  for (const auto& item : j) {
    out.push_back({KbPathFromJson(item.at("kb_path")), item.at("api_path").get<std::string>(),
                   item.value("kind", "FPM") == "BPM" ? MatchKind::kBranchingPoint
                                                      : MatchKind::kFixedPath});
  }
  return out;
}

namespace {

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void WriteFixtures(const std::filesystem::path& dir, const SyntheticPair& pair) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "api");
  WriteText(dir / "kb.nt", pair.ntriples);
  WriteText(dir / "gold.json", DumpJson(GoldToJson(pair.gold)));

  nlohmann::json responses = nlohmann::json::object();
  size_t n = 0;
  for (const auto& [value, reply] : pair.api->responses) {
    std::string file = fmt::format("r{:05}.json", n++);
    WriteText(dir / "api" / file, reply.body);
    responses[value] = {{"status", reply.status}, {"file", file}};
  }
  nlohmann::json index = {{"url_template", pair.api->url_template},
                          {"input_class", pair.api->input_class},
                          {"unknown_status", pair.api->unknown_status},
                          {"responses", responses}};
  WriteText(dir / "api" / "index.json", DumpJson(index));

  nlohmann::json registry = {
      {"kbs", {{"synthetic", {{"path", "kb.nt"}}}}},
      {"apis",
       {{"synthetic",
         {{"url", pair.api->url_template},
          {"input_class", pair.api->input_class},
          {"rate_limit_ms", 0},
          {"timeout_ms", 2000},
          {"max_retries", 0},
          {"replay_dir", "api"}}}}},
  };
  WriteText(dir / "registry.json", DumpJson(registry));
}

std::shared_ptr<const MockApi> LoadReplayApi(const std::filesystem::path& api_dir) {
  nlohmann::json index = nlohmann::json::parse(ReadText(api_dir / "index.json"));
  auto api = std::make_shared<MockApi>();
  api->url_template = index.at("url_template").get<std::string>();
  api->input_class = index.value("input_class", "");
  api->unknown_status = index.value("unknown_status", 200);
  for (const auto& [value, entry] : index.at("responses").items()) {
    api->responses[value] = {entry.at("status").get<int>(),
                             ReadText(api_dir / entry.at("file").get<std::string>())};
  }
  return api;
}

struct LoopbackServer::Impl {
  httplib::Server server;
};

LoopbackServer::LoopbackServer(std::shared_ptr<const MockApi> api)
    : impl_(std::make_unique<Impl>()), api_(std::move(api)) {
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("loopback server could not bind");
  const std::string tmpl = url_template();
  impl_->server.Get(".*", [this, tmpl](const httplib::Request& req, httplib::Response& res) {
    auto value = ExtractTemplateValue(tmpl, fmt::format("http://127.0.0.1:{}{}", port_, req.target));
    HttpReply reply = value ? api_->Lookup(*value) : HttpReply{400, R"({"error":"bad request"})"};
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

LoopbackServer::~LoopbackServer() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string LoopbackServer::url_template() const {
  // Keep path and query of the original template, swap the origin.
  const std::string& t = api_->url_template;
  auto scheme = t.find("://");
  auto path = t.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  std::string rest = path == std::string::npos ? "/" : t.substr(path);
  return fmt::format("http://127.0.0.1:{}{}", port_, rest);
}

Scores Evaluate(const std::vector<AlignmentEntry>& found, const std::vector<GoldEntry>& gold) {
  using Key = std::pair<KbPath, std::string>;
  std::map<Key, MatchKind> found_set;
  for (const auto& e : found) found_set.emplace(Key{e.kb_path, e.api_path}, e.kind);
  std::map<Key, MatchKind> gold_set;
  for (const auto& g : gold) gold_set.emplace(Key{g.kb_path, g.api_path}, g.kind);

  Scores s;
  s.found = found_set.size();
  s.gold = gold_set.size();
  for (const auto& [key, kind] : found_set) {
    auto it = gold_set.find(key);
    if (it == gold_set.end()) continue;
    ++s.correct;
    if (it->second != kind) ++s.kind_mismatches;
  }
  if (s.found == 0) {
    s.precision = s.gold == 0 ? 1.0 : 0.0;
  } else {
    s.precision = static_cast<double>(s.correct) / static_cast<double>(s.found);
  }
  s.recall = s.gold == 0 ? 1.0 : static_cast<double>(s.correct) / static_cast<double>(s.gold);
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

}  // namespace linkpoint
