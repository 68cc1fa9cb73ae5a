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

#include "linkpoint/similarity.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace linkpoint {

namespace {

constexpr std::array<MethodInfo, kCatalogueSize> kCatalogue = {{
    {SimilarityMethod::kEqual, "Equal", MethodCategory::kEqual},
    {SimilarityMethod::kNormalizedEqual, "NormalizedEqual", MethodCategory::kEqual},
    {SimilarityMethod::kLevenshtein, "NormalizedLevenshtein", MethodCategory::kEdit},
    {SimilarityMethod::kDamerauLevenshtein, "DamerauLevenshtein", MethodCategory::kEdit},
    {SimilarityMethod::kJaro, "Jaro", MethodCategory::kEdit},
    {SimilarityMethod::kJaroWinkler, "JaroWinkler", MethodCategory::kEdit},
    {SimilarityMethod::kLcs, "LongestCommonSubsequence", MethodCategory::kEdit},
    {SimilarityMethod::kJaccardWords, "JaccardWords", MethodCategory::kSet},
    {SimilarityMethod::kDiceWords, "DiceWords", MethodCategory::kSet},
    {SimilarityMethod::kCosineWords, "CosineWords", MethodCategory::kSet},
    {SimilarityMethod::kJaccardBigrams, "JaccardBigrams", MethodCategory::kSet},
    {SimilarityMethod::kDiceBigrams, "DiceBigrams", MethodCategory::kSet},
    {SimilarityMethod::kCosineBigrams, "CosineBigrams", MethodCategory::kSet},
    {SimilarityMethod::kJaccardTrigrams, "JaccardTrigrams", MethodCategory::kSet},
    {SimilarityMethod::kMongeElkan, "MongeElkan", MethodCategory::kSet},
}};

constexpr std::string_view kIdentifierMethodName = "Identifier";

std::u32string ToCodePoints(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

std::u32string CollapseWhitespace(const std::u32string& in) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : in) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::u32string> SortedUnique(std::vector<std::u32string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::u32string> NGrams(const std::u32string& s, size_t n) {
  std::vector<std::u32string> out;
  if (s.empty()) return out;
  if (s.size() < n) return {s};
  for (size_t i = 0; i + n <= s.size(); ++i) out.push_back(s.substr(i, n));
  return SortedUnique(std::move(out));
}

size_t IntersectionSize(const std::vector<std::u32string>& a,
                        const std::vector<std::u32string>& b) {
  size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

enum class SetMeasure { kJaccard, kDice, kCosine };

double SetSimilarity(const std::vector<std::u32string>& a, const std::vector<std::u32string>& b,
                     SetMeasure measure) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double inter = static_cast<double>(IntersectionSize(a, b));
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  switch (measure) {
    case SetMeasure::kJaccard: return inter / (na + nb - inter);
    case SetMeasure::kDice: return 2.0 * inter / (na + nb);
    case SetMeasure::kCosine: return inter / std::sqrt(na * nb);
  }
  return 0.0;
}

double EditSimilarity(size_t distance, size_t la, size_t lb) {
  size_t m = std::max(la, lb);
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(distance) / static_cast<double>(m);
}

double Jaro(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  size_t window = std::max(a.size(), b.size()) / 2;
  window = window > 0 ? window - 1 : 0;
  std::vector<bool> ma(a.size(), false), mb(b.size(), false);
  size_t matches = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    size_t lo = i > window ? i - window : 0;
    size_t hi = std::min(b.size(), i + window + 1);
    for (size_t j = lo; j < hi; ++j) {
      if (!mb[j] && a[i] == b[j]) {
        ma[i] = mb[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;
  size_t transpositions = 0;
  for (size_t i = 0, j = 0; i < a.size(); ++i) {
    if (!ma[i]) continue;
    while (!mb[j]) ++j;
    if (a[i] != b[j]) ++transpositions;
    ++j;
  }
  double m = static_cast<double>(matches);
  double t = static_cast<double>(transpositions / 2);
  return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) + (m - t) / m) /
         3.0;
}

double JaroWinkler(std::u32string_view a, std::u32string_view b) {
  double jaro = Jaro(a, b);
  if (jaro <= 0.7) return jaro;
  size_t prefix = 0;
  size_t limit = std::min<size_t>({4, a.size(), b.size()});
  while (prefix < limit && a[prefix] == b[prefix]) ++prefix;
  return jaro + static_cast<double>(prefix) * 0.1 * (1.0 - jaro);
}

size_t LcsLength(std::u32string_view a, std::u32string_view b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double MongeElkanOneWay(const std::vector<std::u32string>& a,
                        const std::vector<std::u32string>& b) {
  double sum = 0.0;
  for (const auto& ta : a) {
    double best = 0.0;
    for (const auto& tb : b) {
      best = std::max(best, EditSimilarity(LevenshteinDistance(ta, tb), ta.size(), tb.size()));
    }
    sum += best;
  }
  return sum / static_cast<double>(a.size());
}

struct ComparatorRegistry {
  std::mutex mu;
  std::map<std::string, ComparatorFactory> factories;
  ComparatorRegistry() {
    factories[std::string(NormalizedExactComparator::kName)] = [] {
      return std::make_unique<NormalizedExactComparator>();
    };
  }
};

ComparatorRegistry& Registry() {
  static ComparatorRegistry registry;
  return registry;
}

}  // namespace

std::span<const MethodInfo, kCatalogueSize> Catalogue() { return kCatalogue; }

std::string_view MethodName(SimilarityMethod m) {
  if (m == SimilarityMethod::kIdentifier) return kIdentifierMethodName;
  return kCatalogue[static_cast<size_t>(m)].name;
}

MethodCategory CategoryOf(SimilarityMethod m) {
  if (m == SimilarityMethod::kIdentifier) return MethodCategory::kIdentifier;
  return kCatalogue[static_cast<size_t>(m)].category;
}

std::optional<SimilarityMethod> MethodFromName(std::string_view name) {
  if (name == kIdentifierMethodName) return SimilarityMethod::kIdentifier;
  for (const auto& info : kCatalogue) {
    if (info.name == name) return info.method;
  }
  return std::nullopt;
}

std::u32string DecodeUtf8(std::string_view s) {
  return ToCodePoints(icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size()))));
}

std::string EncodeUtf8(std::u32string_view s) {
  icu::UnicodeString u;
  for (char32_t c : s) u.append(static_cast<UChar32>(c));
  std::string out;
  u.toUTF8String(out);
  return out;
}

PreparedString::PreparedString(std::string_view raw) : raw_(raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  icu::UnicodeString u =
      icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  if (U_SUCCESS(status)) {
    icu::UnicodeString composed = nfc->normalize(u, status);
    if (U_SUCCESS(status)) u = composed;
  }
  u.toLower(icu::Locale::getRoot());
  normalized_ = CollapseWhitespace(ToCodePoints(u));

  std::u32string no_punct;
  for (char32_t c : normalized_) {
    if (!u_ispunct(static_cast<UChar32>(c))) no_punct.push_back(c);
  }
  punctuation_free_ = CollapseWhitespace(no_punct);

  std::u32string token;
  for (char32_t c : normalized_) {
    if (u_isalnum(static_cast<UChar32>(c))) {
      token.push_back(c);
    } else if (!token.empty()) {
      words_.push_back(std::move(token));
      token.clear();
    }
  }
  if (!token.empty()) words_.push_back(std::move(token));
  word_set_ = SortedUnique(words_);
  bigrams_ = NGrams(normalized_, 2);
  trigrams_ = NGrams(normalized_, 3);
}

size_t LevenshteinDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

size_t DamerauLevenshteinDistance(std::u32string_view a, std::u32string_view b) {
  // Unrestricted variant (Lowrance-Wagner): transposed pairs may be edited.
  const size_t la = a.size(), lb = b.size();
  const size_t inf = la + lb;
  std::vector<std::vector<size_t>> d(la + 2, std::vector<size_t>(lb + 2, 0));
  d[0][0] = inf;
  for (size_t i = 0; i <= la; ++i) {
    d[i + 1][0] = inf;
    d[i + 1][1] = i;
  }
  for (size_t j = 0; j <= lb; ++j) {
    d[0][j + 1] = inf;
    d[1][j + 1] = j;
  }
  std::unordered_map<char32_t, size_t> last_row;
  for (size_t i = 1; i <= la; ++i) {
    size_t last_match_col = 0;
    for (size_t j = 1; j <= lb; ++j) {
      auto it = last_row.find(b[j - 1]);
      size_t i1 = it == last_row.end() ? 0 : it->second;
      size_t j1 = last_match_col;
      size_t cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        last_match_col = j;
      }
      d[i + 1][j + 1] = std::min({d[i][j] + cost, d[i + 1][j] + 1, d[i][j + 1] + 1,
                                  d[i1][j1] + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row[a[i - 1]] = i;
  }
  return d[la + 1][lb + 1];
}

std::optional<size_t> BoundedLevenshtein(std::string_view a, std::string_view b,
                                         size_t max_distance) {
  if (a.size() < b.size()) std::swap(a, b);
  const size_t la = a.size(), lb = b.size();
  if (la - lb > max_distance) return std::nullopt;
  if (lb == 0) return la;
  const size_t k = max_distance;
  const size_t big = k + 1;
  // Row over b; only columns within k of the diagonal are computed.
  std::vector<size_t> prev(lb + 1, big), cur(lb + 1, big);
  for (size_t j = 0; j <= std::min(lb, k); ++j) prev[j] = j;
  for (size_t i = 1; i <= la; ++i) {
    size_t lo = i > k ? i - k : 0;
    size_t hi = std::min(lb, i + k);
    std::fill(cur.begin(), cur.end(), big);
    if (lo == 0) cur[0] = i <= k ? i : big;
    size_t row_min = lo == 0 ? cur[0] : big;
    for (size_t j = std::max<size_t>(lo, 1); j <= hi; ++j) {
      size_t v = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      v = std::min(v, prev[j] + 1);
      v = std::min(v, cur[j - 1] + 1);
      cur[j] = std::min(v, big);
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > k) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[lb] > k) return std::nullopt;
  return prev[lb];
}

double ByteLevenshteinSimilarity(std::string_view a, std::string_view b) {
  size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  auto d = BoundedLevenshtein(a, b, m);
  return 1.0 - static_cast<double>(*d) / static_cast<double>(m);
}

bool LevenshteinSimilarAbove(std::string_view a, std::string_view b, double threshold) {
  size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0 > threshold;
  if (threshold < 0.0) return true;
  double budget = (1.0 - threshold) * static_cast<double>(m);
  if (budget < 0.0) return false;
  auto d = BoundedLevenshtein(a, b, static_cast<size_t>(std::floor(budget)) + 1);
  if (!d) return false;
  return 1.0 - static_cast<double>(*d) / static_cast<double>(m) > threshold;
}

double Similarity(SimilarityMethod method, const PreparedString& a, const PreparedString& b) {
  const auto& na = a.normalized();
  const auto& nb = b.normalized();
  auto edit_guard = [&]() -> std::optional<double> {
    if (na.empty() && nb.empty()) return 1.0;
    if (na.empty() || nb.empty()) return 0.0;
    return std::nullopt;
  };
  switch (method) {
    case SimilarityMethod::kEqual:
      return a.raw() == b.raw() ? 1.0 : 0.0;
    case SimilarityMethod::kNormalizedEqual:
      return a.punctuation_free() == b.punctuation_free() ? 1.0 : 0.0;
    case SimilarityMethod::kLevenshtein:
      if (auto g = edit_guard()) return *g;
      return EditSimilarity(LevenshteinDistance(na, nb), na.size(), nb.size());
    case SimilarityMethod::kDamerauLevenshtein:
      if (auto g = edit_guard()) return *g;
      return EditSimilarity(DamerauLevenshteinDistance(na, nb), na.size(), nb.size());
    case SimilarityMethod::kJaro:
      return Jaro(na, nb);
    case SimilarityMethod::kJaroWinkler:
      return JaroWinkler(na, nb);
    case SimilarityMethod::kLcs:
      if (auto g = edit_guard()) return *g;
      return static_cast<double>(LcsLength(na, nb)) /
             static_cast<double>(std::max(na.size(), nb.size()));
    case SimilarityMethod::kJaccardWords:
      return SetSimilarity(a.word_set(), b.word_set(), SetMeasure::kJaccard);
    case SimilarityMethod::kDiceWords:
      return SetSimilarity(a.word_set(), b.word_set(), SetMeasure::kDice);
    case SimilarityMethod::kCosineWords:
      return SetSimilarity(a.word_set(), b.word_set(), SetMeasure::kCosine);
    case SimilarityMethod::kJaccardBigrams:
      return SetSimilarity(a.bigrams(), b.bigrams(), SetMeasure::kJaccard);
    case SimilarityMethod::kDiceBigrams:
      return SetSimilarity(a.bigrams(), b.bigrams(), SetMeasure::kDice);
    case SimilarityMethod::kCosineBigrams:
      return SetSimilarity(a.bigrams(), b.bigrams(), SetMeasure::kCosine);
    case SimilarityMethod::kJaccardTrigrams:
      return SetSimilarity(a.trigrams(), b.trigrams(), SetMeasure::kJaccard);
    case SimilarityMethod::kMongeElkan: {
      const auto& wa = a.words();
      const auto& wb = b.words();
      if (wa.empty() && wb.empty()) return 1.0;
      if (wa.empty() || wb.empty()) return 0.0;
      // The smaller direction keeps the measure symmetric without letting a
      // short string score high just by being contained in a long one.
      return std::min(MongeElkanOneWay(wa, wb), MongeElkanOneWay(wb, wa));
    }
    case SimilarityMethod::kIdentifier:
      break;
  }
  throw std::invalid_argument("identifier comparison has no similarity score");
}

double Similarity(SimilarityMethod method, std::string_view a, std::string_view b) {
  return Similarity(method, PreparedString(a), PreparedString(b));
}

std::string NormalizedExactComparator::Canonical(std::string_view s) {
  PreparedString p(s);
  std::u32string out;
  for (char32_t c : p.normalized()) {
    if (u_isalnum(static_cast<UChar32>(c))) out.push_back(c);
  }
  return EncodeUtf8(out);
}

bool NormalizedExactComparator::Equal(std::string_view a, std::string_view b) const {
  return Canonical(a) == Canonical(b);
}

bool IdentifierEqual(std::string_view a, std::string_view b) {
  return NormalizedExactComparator().Equal(a, b);
}

void RegisterIdentifierComparator(const std::string& name, ComparatorFactory factory) {
  auto& reg = Registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  reg.factories[name] = std::move(factory);
}

std::unique_ptr<IdentifierComparator> MakeIdentifierComparator(const std::string& name) {
  auto& reg = Registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto it = reg.factories.find(name);
  if (it == reg.factories.end()) {
    throw std::invalid_argument("unknown identifier comparator: " + name);
  }
  return it->second();
}

std::vector<std::string> IdentifierComparatorNames() {
  auto& reg = Registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  std::vector<std::string> out;
  for (const auto& [name, _] : reg.factories) out.push_back(name);
  return out;
}

std::string_view ValueKindName(ValueKind k) {
  switch (k) {
    case ValueKind::kIri: return "iri";
    case ValueKind::kNumeric: return "numeric";
    case ValueKind::kIdentifier: return "identifier";
    case ValueKind::kPlainString: return "plain-string";
  }
  return "";
}

bool LooksLikeIri(std::string_view s) {
  // scheme "://" rest, no whitespace
  size_t colon = s.find("://");
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (size_t i = 0; i < colon; ++i) {
    char c = s[i];
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')) {
      return false;
    }
  }
  if (colon + 3 >= s.size()) return false;
  return std::none_of(s.begin(), s.end(),
                      [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::optional<std::string> CanonicalNumber(std::string_view s) {
  size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  std::string digits;
  long long exponent = 0;
  bool any_digit = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits += s[i++];
    any_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      --exponent;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) exp_negative = s[i++] == '-';
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    long long e = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      if (e < 1000000) e = e * 10 + (s[i] - '0');
      ++i;
    }
    exponent += exp_negative ? -e : e;
  }
  if (i != s.size()) return std::nullopt;
  size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return std::string("0");
  digits.erase(0, first);
  while (digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
    ++exponent;
  }
  std::string out = negative ? "-" : "";
  out += digits;
  out += "e" + std::to_string(exponent);
  return out;
}

ValueKind ClassifyPair(std::string_view kb_value, bool kb_value_is_iri_typed,
                       std::string_view api_value, bool identifier_relation) {
  if (kb_value_is_iri_typed || LooksLikeIri(kb_value) || LooksLikeIri(api_value)) {
    return ValueKind::kIri;
  }
  if (identifier_relation) return ValueKind::kIdentifier;
  if (CanonicalNumber(kb_value) || CanonicalNumber(api_value)) return ValueKind::kNumeric;
  return ValueKind::kPlainString;
}

std::optional<ScoredMethod> BestMatch(const PreparedString& kb_value,
                                      const PreparedString& api_value, ValueKind kind,
                                      double theta_str,
                                      const IdentifierComparator& comparator) {
  ScoredMethod best{SimilarityMethod::kEqual, 0.0};
  switch (kind) {
    case ValueKind::kIri:
      best = {SimilarityMethod::kEqual, Similarity(SimilarityMethod::kEqual, kb_value, api_value)};
      break;
    case ValueKind::kNumeric: {
      auto a = CanonicalNumber(kb_value.raw());
      auto b = CanonicalNumber(api_value.raw());
      best = {SimilarityMethod::kEqual, a && b && *a == *b ? 1.0 : 0.0};
      break;
    }
    case ValueKind::kIdentifier:
      best = {SimilarityMethod::kIdentifier,
              comparator.Equal(kb_value.raw(), api_value.raw()) ? 1.0 : 0.0};
      break;
    case ValueKind::kPlainString:
      for (const auto& info : kCatalogue) {
        double s = Similarity(info.method, kb_value, api_value);
        if (s > best.score) best = {info.method, s};
        if (best.score >= 1.0) break;
      }
      break;
  }
  if (best.score < theta_str) return std::nullopt;
  // IRI, numeric and identifier comparisons are pass/fail.
  if (kind != ValueKind::kPlainString && best.score == 0.0) return std::nullopt;
  return best;
}

std::optional<ScoredMethod> BestMatch(std::string_view kb_value, std::string_view api_value,
                                      ValueKind kind, double theta_str) {
  NormalizedExactComparator comparator;
  return BestMatch(PreparedString(kb_value), PreparedString(api_value), kind, theta_str,
                   comparator);
}

}  // namespace linkpoint
