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

#ifndef LINKPOINT_SIMILARITY_H_
#define LINKPOINT_SIMILARITY_H_

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linkpoint {

// The string similarity catalogue, in tie-break priority order, followed by
// the identifier comparator slot which is not part of the catalogue.
enum class SimilarityMethod : uint8_t {
  kEqual,
  kNormalizedEqual,
  kLevenshtein,
  kDamerauLevenshtein,
  kJaro,
  kJaroWinkler,
  kLcs,
  kJaccardWords,
  kDiceWords,
  kCosineWords,
  kJaccardBigrams,
  kDiceBigrams,
  kCosineBigrams,
  kJaccardTrigrams,
  kMongeElkan,
  kIdentifier,
};

enum class MethodCategory : uint8_t { kEqual, kEdit, kSet, kIdentifier };

struct MethodInfo {
  SimilarityMethod method;
  std::string_view name;
  MethodCategory category;
};

inline constexpr size_t kCatalogueSize = 15;

std::span<const MethodInfo, kCatalogueSize> Catalogue();
std::string_view MethodName(SimilarityMethod m);
MethodCategory CategoryOf(SimilarityMethod m);
std::optional<SimilarityMethod> MethodFromName(std::string_view name);

// A value pre-processed once for repeated comparisons: NFC, lower case and
// collapsed whitespace for the edit and set methods; raw for Equal.
class PreparedString {
 public:
  explicit PreparedString(std::string_view raw);

  const std::string& raw() const { return raw_; }
  const std::u32string& normalized() const { return normalized_; }
  const std::u32string& punctuation_free() const { return punctuation_free_; }
  const std::vector<std::u32string>& words() const { return words_; }
  const std::vector<std::u32string>& word_set() const { return word_set_; }
  const std::vector<std::u32string>& bigrams() const { return bigrams_; }
  const std::vector<std::u32string>& trigrams() const { return trigrams_; }

 private:
  std::string raw_;
  std::u32string normalized_;
  std::u32string punctuation_free_;
  std::vector<std::u32string> words_;
  std::vector<std::u32string> word_set_;
  std::vector<std::u32string> bigrams_;
  std::vector<std::u32string> trigrams_;
};

// Score in [0, 1]; symmetric; 1 for identical inputs. Not valid for
// kIdentifier, which is a boolean comparator.
double Similarity(SimilarityMethod method, const PreparedString& a, const PreparedString& b);
double Similarity(SimilarityMethod method, std::string_view a, std::string_view b);

// Plain edit distances over code point sequences, exposed for reuse.
size_t LevenshteinDistance(std::u32string_view a, std::u32string_view b);
size_t DamerauLevenshteinDistance(std::u32string_view a, std::u32string_view b);

// Byte-level Levenshtein distance if it is <= max_distance, else nullopt.
// Runs in O(max_distance * min(|a|, |b|)).
std::optional<size_t> BoundedLevenshtein(std::string_view a, std::string_view b,
                                         size_t max_distance);

// True iff 1 - lev(a,b)/max(|a|,|b|) > threshold, computed over bytes.
bool LevenshteinSimilarAbove(std::string_view a, std::string_view b, double threshold);
double ByteLevenshteinSimilarity(std::string_view a, std::string_view b);

std::u32string DecodeUtf8(std::string_view s);
std::string EncodeUtf8(std::u32string_view s);

// Pluggable comparator for identifier values (DOIs, ISBNs, ...).
class IdentifierComparator {
 public:
  virtual ~IdentifierComparator() = default;
  virtual std::string_view name() const = 0;
  virtual bool Equal(std::string_view a, std::string_view b) const = 0;
};

// Lower-cases, strips every non-alphanumeric character and compares exactly.
class NormalizedExactComparator : public IdentifierComparator {
 public:
  static constexpr std::string_view kName = "normalized-exact";
  std::string_view name() const override { return kName; }
  bool Equal(std::string_view a, std::string_view b) const override;
  static std::string Canonical(std::string_view s);
};

bool IdentifierEqual(std::string_view a, std::string_view b);

using ComparatorFactory = std::function<std::unique_ptr<IdentifierComparator>()>;

// Name -> factory; "normalized-exact" is always registered.
void RegisterIdentifierComparator(const std::string& name, ComparatorFactory factory);
std::unique_ptr<IdentifierComparator> MakeIdentifierComparator(const std::string& name);
std::vector<std::string> IdentifierComparatorNames();

enum class ValueKind : uint8_t { kIri, kNumeric, kIdentifier, kPlainString };

std::string_view ValueKindName(ValueKind k);

bool LooksLikeIri(std::string_view s);

// Canonical form of a decimal number ("2020", "2.02e3", "-0.50") or nullopt.
std::optional<std::string> CanonicalNumber(std::string_view s);

// IRI if either side is an IRI, identifier if the KB relation is one,
// numeric if either side is a number (compared exactly), plain string otherwise.
ValueKind ClassifyPair(std::string_view kb_value, bool kb_value_is_iri_typed,
                       std::string_view api_value, bool identifier_relation);

struct ScoredMethod {
  SimilarityMethod method;
  double score;
};

// Best method for the pair under the kind's rules; present only if its score
// reaches theta_str.
std::optional<ScoredMethod> BestMatch(const PreparedString& kb_value,
                                      const PreparedString& api_value, ValueKind kind,
                                      double theta_str,
                                      const IdentifierComparator& comparator);
std::optional<ScoredMethod> BestMatch(std::string_view kb_value, std::string_view api_value,
                                      ValueKind kind, double theta_str);

}  // namespace linkpoint

#endif  // LINKPOINT_SIMILARITY_H_
