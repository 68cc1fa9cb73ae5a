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

#include "linkpoint/kb_store.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

namespace linkpoint {

std::string_view DirectionName(Direction d) {
  return d == Direction::kForward ? "forward" : "inverse";
}

namespace {

constexpr size_t kMaxStoredWarnings = 100;

void AppendUtf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool IsIriForbidden(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' ||
         c == '|' || c == '^' || c == '`' || c == '\\';
}

class LineParser {
 public:
  explicit LineParser(std::string_view line) : s_(line) {}

  void SkipWs() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool AtEnd() const { return pos_ >= s_.size(); }
  char Peek() const { return AtEnd() ? '\0' : s_[pos_]; }

  [[noreturn]] void Fail(std::string_view what) const {
    throw KbError(fmt::format("{} at column {}", what, pos_ + 1));
  }

  uint32_t ReadHex(int digits) {
    if (pos_ + digits > s_.size()) Fail("truncated unicode escape");
    uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= c - '0';
      else if (c >= 'a' && c <= 'f') cp |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') cp |= c - 'A' + 10;
      else Fail("bad hex digit in escape");
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) Fail("invalid code point");
    return cp;
  }

  std::string ReadIri() {
    if (Peek() != '<') Fail("expected '<'");
    ++pos_;
    std::string out;
    for (;;) {
      if (AtEnd()) Fail("unterminated IRI");
      char c = s_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        char e = AtEnd() ? '\0' : s_[pos_++];
        if (e == 'u') AppendUtf8(out, ReadHex(4));
        else if (e == 'U') AppendUtf8(out, ReadHex(8));
        else Fail("bad escape in IRI");
        continue;
      }
      if (IsIriForbidden(static_cast<unsigned char>(c))) Fail("invalid character in IRI");
      out += c;
    }
    if (out.empty()) Fail("empty IRI");
    return out;
  }

  std::string ReadBlank() {
    if (s_.substr(pos_, 2) != "_:") Fail("expected blank node");
    pos_ += 2;
    size_t start = pos_;
    while (!AtEnd() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '.') ++pos_;
    // A trailing '.' directly after the label terminates the statement.
    if (pos_ == start) Fail("empty blank node label");
    return std::string(s_.substr(start, pos_ - start));
  }

  Term ReadSubject() {
    if (Peek() == '<') return Term::Iri(ReadIri());
    if (Peek() == '_') return Term::Blank(ReadBlank());
    Fail("expected subject");
  }

  Term ReadObject() {
    if (Peek() == '<') return Term::Iri(ReadIri());
    if (Peek() == '_') return Term::Blank(ReadBlank());
    if (Peek() == '"') return ReadLiteral();
    Fail("expected object");
  }

  Term ReadLiteral() {
    ++pos_;  // opening quote
    std::string lexical;
    for (;;) {
      if (AtEnd()) Fail("unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (AtEnd()) Fail("dangling escape");
        char e = s_[pos_++];
        switch (e) {
          case 't': lexical += '\t'; break;
          case 'b': lexical += '\b'; break;
          case 'n': lexical += '\n'; break;
          case 'r': lexical += '\r'; break;
          case 'f': lexical += '\f'; break;
          case '"': lexical += '"'; break;
          case '\'': lexical += '\''; break;
          case '\\': lexical += '\\'; break;
          case 'u': AppendUtf8(lexical, ReadHex(4)); break;
          case 'U': AppendUtf8(lexical, ReadHex(8)); break;
          default: Fail("unknown escape in literal");
        }
        continue;
      }
      lexical += c;
    }
    std::string datatype, language;
    if (Peek() == '@') {
      ++pos_;
      size_t start = pos_;
      while (!AtEnd() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
      if (pos_ == start) Fail("empty language tag");
      language = std::string(s_.substr(start, pos_ - start));
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      datatype = ReadIri();
    }
    return Term::Literal(std::move(lexical), std::move(datatype), std::move(language));
  }

  void ExpectDotAndEnd() {
    SkipWs();
    if (Peek() != '.') Fail("missing terminating '.'");
    ++pos_;
    SkipWs();
    if (!AtEnd() && Peek() != '#') Fail("trailing content after '.'");
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;
};

std::string_view Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::string EscapeLiteral(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::optional<ParsedStatement> ParseNTriplesLine(std::string_view raw) {
  std::string_view line = Trim(raw);
  if (line.empty() || line.front() == '#') return std::nullopt;
  LineParser p(line);
  ParsedStatement st;
  st.subject = p.ReadSubject();
  p.SkipWs();
  st.predicate = Term::Iri(p.ReadIri());
  p.SkipWs();
  st.object = p.ReadObject();
  p.ExpectDotAndEnd();
  return st;
}

std::string FormatNTriplesTerm(const Term& term) {
  switch (term.kind) {
    case TermKind::kIri:
      return "<" + term.value + ">";
    case TermKind::kBlank:
      return "_:" + term.value;
    case TermKind::kLiteral: {
      std::string out = "\"" + EscapeLiteral(term.value) + "\"";
      if (!term.language.empty()) out += "@" + term.language;
      else if (!term.datatype.empty()) out += "^^<" + term.datatype + ">";
      return out;
    }
  }
  return {};
}

size_t KnowledgeBase::TermHash::operator()(const Term& t) const {
  size_t h = std::hash<std::string>{}(t.value);
  h ^= static_cast<size_t>(t.kind) * 0x9e3779b97f4a7c15ULL;
  if (!t.datatype.empty()) h ^= std::hash<std::string>{}(t.datatype) << 1;
  if (!t.language.empty()) h ^= std::hash<std::string>{}(t.language) << 2;
  return h;
}

std::span<const uint32_t> KnowledgeBase::Index::Get(TermId id) const {
  if (static_cast<size_t>(id) + 1 >= offsets.size()) return {};
  return std::span<const uint32_t>(entries).subspan(offsets[id],
                                                    offsets[id + 1] - offsets[id]);
}

TermId KnowledgeBase::Intern(const Term& t) {
  auto it = term_ids_.find(t);
  if (it != term_ids_.end()) return it->second;
  auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(t);
  term_ids_.emplace(t, id);
  return id;
}

KnowledgeBase KnowledgeBase::Load(std::istream& in, const LoadOptions& options,
                                  LoadReport* report) {
  if (!in) throw KbError("unreadable N-Triples stream");
  KnowledgeBase kb;
  kb.type_predicate_iri_ = options.type_predicate;
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = LoadReport{};

  std::string line;
  while (std::getline(in, line)) {
    ++rep.lines;
    try {
      auto st = ParseNTriplesLine(line);
      if (!st) continue;
      Triple t{kb.Intern(st->subject), kb.Intern(st->predicate), kb.Intern(st->object)};
      kb.triples_.push_back(t);
    } catch (const KbError& e) {
      ++rep.skipped;
      if (rep.warnings.size() < kMaxStoredWarnings) {
        rep.warnings.push_back(fmt::format("line {}: {}", rep.lines, e.what()));
      }
    }
  }
  if (in.bad()) throw KbError("error while reading N-Triples stream");
  kb.BuildIndexes();
  rep.triples = kb.triples_.size();
  return kb;
}

KnowledgeBase KnowledgeBase::LoadFile(const std::filesystem::path& path,
                                      const LoadOptions& options, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KbError("cannot open knowledge base file: " + path.string());
  return Load(in, options, report);
}

KnowledgeBase KnowledgeBase::FromTerms(const std::vector<ParsedStatement>& statements,
                                       const LoadOptions& options) {
  KnowledgeBase kb;
  kb.type_predicate_iri_ = options.type_predicate;
  for (const auto& st : statements) {
    kb.triples_.push_back(
        Triple{kb.Intern(st.subject), kb.Intern(st.predicate), kb.Intern(st.object)});
  }
  kb.BuildIndexes();
  return kb;
}

void KnowledgeBase::BuildIndexes() {
  // Set semantics: keep the first occurrence of each triple.
  {
    std::vector<uint32_t> order(triples_.size());
    for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return triples_[a] < triples_[b]; });
    std::vector<bool> keep(triples_.size(), true);
    for (size_t i = 1; i < order.size(); ++i) {
      if (triples_[order[i]] == triples_[order[i - 1]]) keep[order[i]] = false;
    }
    std::vector<Triple> unique;
    unique.reserve(triples_.size());
    for (size_t i = 0; i < triples_.size(); ++i) {
      if (keep[i]) unique.push_back(triples_[i]);
    }
    triples_ = std::move(unique);
  }

  auto build = [&](Index& index, auto key) {
    index.offsets.assign(terms_.size() + 1, 0);
    for (const Triple& t : triples_) ++index.offsets[key(t) + 1];
    for (size_t i = 1; i < index.offsets.size(); ++i) index.offsets[i] += index.offsets[i - 1];
    index.entries.assign(triples_.size(), 0);
    std::vector<uint32_t> cursor(index.offsets.begin(), index.offsets.end() - 1);
    for (uint32_t i = 0; i < triples_.size(); ++i) {
      index.entries[cursor[key(triples_[i])]++] = i;
    }
  };
  build(by_subject_, [](const Triple& t) { return t.subject; });
  build(by_object_, [](const Triple& t) { return t.object; });
  build(by_predicate_, [](const Triple& t) { return t.predicate; });

  for (const Triple& t : triples_) {
    const Term& o = terms_[t.object];
    if (o.is_literal()) ++value_counts_[t.predicate][o.value];
  }
  type_predicate_ = FindIri(type_predicate_iri_);
}

std::optional<TermId> KnowledgeBase::Find(const Term& t) const {
  auto it = term_ids_.find(t);
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> KnowledgeBase::FindIri(std::string_view iri) const {
  return Find(Term::Iri(std::string(iri)));
}

std::span<const uint32_t> KnowledgeBase::BySubject(TermId s) const { return by_subject_.Get(s); }
std::span<const uint32_t> KnowledgeBase::ByObject(TermId o) const { return by_object_.Get(o); }
std::span<const uint32_t> KnowledgeBase::ByPredicate(TermId p) const { return by_predicate_.Get(p); }

std::vector<TermId> KnowledgeBase::Predicates() const {
  std::vector<TermId> out;
  for (TermId id = 0; id < terms_.size(); ++id) {
    if (!by_predicate_.Get(id).empty()) out.push_back(id);
  }
  std::sort(out.begin(), out.end(),
            [&](TermId a, TermId b) { return terms_[a].value < terms_[b].value; });
  return out;
}

std::vector<TermId> KnowledgeBase::EntitiesOfClass(std::string_view class_iri) const {
  std::vector<TermId> out;
  auto cls = FindIri(class_iri);
  if (!cls || !type_predicate_) return out;
  for (uint32_t idx : ByObject(*cls)) {
    const Triple& t = triples_[idx];
    if (t.predicate == *type_predicate_) out.push_back(t.subject);
  }
  std::sort(out.begin(), out.end(),
            [&](TermId a, TermId b) { return terms_[a] < terms_[b]; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<RelationValuePath> KnowledgeBase::RelationValuePaths(
    TermId entity, const PathQuery& query) const {
  std::vector<RelationValuePath> out;
  if (query.max_depth < 1 || entity >= terms_.size()) return out;
  auto excluded = [&](TermId p) {
    return std::find(query.excluded_predicates.begin(), query.excluded_predicates.end(),
                     p) != query.excluded_predicates.end();
  };

  std::vector<Hop> hops;
  std::vector<TermId> visited{entity};

  // Depth-first enumeration of simple paths; literals end a path.
  std::function<void(TermId)> walk = [&](TermId node) {
    if (static_cast<int>(hops.size()) >= query.max_depth) return;
    for (uint32_t idx : BySubject(node)) {
      const Triple& t = triples_[idx];
      if (excluded(t.predicate)) continue;
      if (std::find(visited.begin(), visited.end(), t.object) != visited.end()) continue;
      hops.push_back({t.predicate, Direction::kForward});
      if (terms_[t.object].is_literal()) {
        out.push_back({hops, entity, t.object});
      } else {
        visited.push_back(t.object);
        walk(t.object);
        visited.pop_back();
      }
      hops.pop_back();
    }
    for (uint32_t idx : ByObject(node)) {
      const Triple& t = triples_[idx];
      if (excluded(t.predicate)) continue;
      if (std::find(visited.begin(), visited.end(), t.subject) != visited.end()) continue;
      // Subjects are never literals, so an inverse hop cannot end a path.
      hops.push_back({t.predicate, Direction::kInverse});
      visited.push_back(t.subject);
      walk(t.subject);
      visited.pop_back();
      hops.pop_back();
    }
  };
  if (!terms_[entity].is_literal()) walk(entity);
  return out;
}

Functionality KnowledgeBase::GetFunctionality(std::string_view predicate_iri,
                                              Direction direction) const {
  auto pred = FindIri(predicate_iri);
  if (!pred || ByPredicate(*pred).empty()) {
    throw UnknownRelationError(std::string(predicate_iri));
  }
  std::unordered_set<TermId> distinct;
  auto entries = ByPredicate(*pred);
  for (uint32_t idx : entries) {
    const Triple& t = triples_[idx];
    distinct.insert(direction == Direction::kForward ? t.subject : t.object);
  }
  return {distinct.size(), entries.size()};
}

size_t KnowledgeBase::ValueFrequency(TermId predicate, std::string_view lexical) const {
  auto it = value_counts_.find(predicate);
  if (it == value_counts_.end()) return 0;
  auto jt = it->second.find(std::string(lexical));
  return jt == it->second.end() ? 0 : jt->second;
}

size_t KnowledgeBase::ValueFrequency(std::string_view predicate_iri,
                                     std::string_view lexical) const {
  auto pred = FindIri(predicate_iri);
  return pred ? ValueFrequency(*pred, lexical) : 0;
}

void KnowledgeBase::Serialize(std::ostream& out) const {
  for (const Triple& t : triples_) {
    out << FormatNTriplesTerm(terms_[t.subject]) << ' '
        << FormatNTriplesTerm(terms_[t.predicate]) << ' '
        << FormatNTriplesTerm(terms_[t.object]) << " .\n";
  }
}

std::string KnowledgeBase::Render(const Hop& hop) const {
  std::string s = terms_[hop.predicate].value;
  if (hop.direction == Direction::kInverse) s += "^-1";
  return s;
}

}  // namespace linkpoint
