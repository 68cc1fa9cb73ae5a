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

#ifndef LINKPOINT_KB_STORE_H_
#define LINKPOINT_KB_STORE_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace linkpoint {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

class KbError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by functionality queries for predicates that never occur.
class UnknownRelationError : public KbError {
 public:
  explicit UnknownRelationError(const std::string& relation)
      : KbError("unknown relation: " + relation), relation_(relation) {}
  const std::string& relation() const { return relation_; }

 private:
  std::string relation_;
};

enum class TermKind : uint8_t { kIri, kBlank, kLiteral };

struct Term {
  TermKind kind = TermKind::kIri;
  // IRI text, blank node label, or literal lexical form.
  std::string value;
  std::string datatype;  // literals only; empty for plain literals
  std::string language;  // literals only

  bool is_literal() const { return kind == TermKind::kLiteral; }
  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

  static Term Iri(std::string iri) { return {TermKind::kIri, std::move(iri), {}, {}}; }
  static Term Blank(std::string label) { return {TermKind::kBlank, std::move(label), {}, {}}; }
  static Term Literal(std::string lexical, std::string datatype = {},
                      std::string language = {}) {
    return {TermKind::kLiteral, std::move(lexical), std::move(datatype),
            std::move(language)};
  }
};

using TermId = uint32_t;

struct Triple {
  TermId subject;
  TermId predicate;
  TermId object;
  auto operator<=>(const Triple&) const = default;
};

enum class Direction : uint8_t { kForward, kInverse };

std::string_view DirectionName(Direction d);

struct Hop {
  TermId predicate;
  Direction direction;
  auto operator<=>(const Hop&) const = default;
};

// A chain of (possibly inverse) hops from an entity to a literal.
struct RelationValuePath {
  std::vector<Hop> hops;
  TermId origin;
  TermId value;

  size_t length() const { return hops.size(); }
};

struct PathQuery {
  int max_depth = 3;
  // Predicates never traversed as a hop, e.g. the type predicate.
  std::vector<TermId> excluded_predicates;
};

// Ratio |{x : exists y r(x,y)}| / |{(x,y) : r(x,y)}| kept as exact counts.
struct Functionality {
  size_t distinct = 0;
  size_t total = 0;
  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(distinct) / static_cast<double>(total);
  }
  bool AtLeast(double threshold) const {
    return static_cast<long double>(distinct) >=
           static_cast<long double>(threshold) * static_cast<long double>(total);
  }
};

struct LoadOptions {
  std::string type_predicate = std::string(kRdfType);
};

struct LoadReport {
  size_t lines = 0;
  size_t triples = 0;  // distinct triples kept
  size_t skipped = 0;  // malformed lines
  std::vector<std::string> warnings;
};

// Parses a single N-Triples statement. Returns nullopt for blank and comment
// lines; throws KbError with a reason for malformed ones.
struct ParsedStatement {
  Term subject, predicate, object;
};
std::optional<ParsedStatement> ParseNTriplesLine(std::string_view line);

std::string FormatNTriplesTerm(const Term& term);

// In-memory triple set with subject, object, predicate and class indexes.
// Immutable after construction, so concurrent readers need no locking.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  static KnowledgeBase Load(std::istream& in, const LoadOptions& options = {},
                            LoadReport* report = nullptr);
  static KnowledgeBase LoadFile(const std::filesystem::path& path,
                                const LoadOptions& options = {},
                                LoadReport* report = nullptr);
  static KnowledgeBase FromTerms(const std::vector<ParsedStatement>& statements,
                                 const LoadOptions& options = {});

  size_t size() const { return triples_.size(); }
  std::span<const Triple> triples() const { return triples_; }
  const Term& term(TermId id) const { return terms_[id]; }
  size_t term_count() const { return terms_.size(); }

  std::optional<TermId> Find(const Term& t) const;
  std::optional<TermId> FindIri(std::string_view iri) const;
  std::optional<TermId> type_predicate() const { return type_predicate_; }
  const std::string& type_predicate_iri() const { return type_predicate_iri_; }

  // Triple indexes (positions into triples()).
  std::span<const uint32_t> BySubject(TermId s) const;
  std::span<const uint32_t> ByObject(TermId o) const;
  std::span<const uint32_t> ByPredicate(TermId p) const;

  // Every predicate occurring in the KB, sorted by IRI.
  std::vector<TermId> Predicates() const;

  // Subjects with a type triple pointing at class_iri, sorted by IRI.
  std::vector<TermId> EntitiesOfClass(std::string_view class_iri) const;

  // All simple forward/inverse paths of length <= max_depth from entity that
  // end in a literal. Literals are terminal; no node repeats within a path.
  std::vector<RelationValuePath> RelationValuePaths(TermId entity,
                                                    const PathQuery& query) const;

  // Throws UnknownRelationError when the predicate does not occur.
  Functionality GetFunctionality(std::string_view predicate_iri,
                                 Direction direction) const;

  // Triples with this predicate whose object has this lexical form.
  size_t ValueFrequency(TermId predicate, std::string_view lexical) const;
  size_t ValueFrequency(std::string_view predicate_iri, std::string_view lexical) const;

  // N-Triples serialization in triple order.
  void Serialize(std::ostream& out) const;

  std::string Render(const Hop& hop) const;

 private:
  TermId Intern(const Term& t);
  void BuildIndexes();

  struct TermHash {
    size_t operator()(const Term& t) const;
  };

  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> term_ids_;
  std::vector<Triple> triples_;

  // CSR-style adjacency: offsets_[id]..offsets_[id+1] into entries.
  struct Index {
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> entries;
    std::span<const uint32_t> Get(TermId id) const;
  };
  Index by_subject_, by_object_, by_predicate_;

  // predicate -> lexical form -> count
  std::unordered_map<TermId, std::unordered_map<std::string, uint32_t>> value_counts_;

  std::string type_predicate_iri_ = std::string(kRdfType);
  std::optional<TermId> type_predicate_;
};

}  // namespace linkpoint

#endif  // LINKPOINT_KB_STORE_H_
