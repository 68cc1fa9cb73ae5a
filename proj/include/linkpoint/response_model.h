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

#ifndef LINKPOINT_RESPONSE_MODEL_H_
#define LINKPOINT_RESPONSE_MODEL_H_

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace linkpoint {

// Raised for bodies that are not JSON documents.
class UnparseableResponse : public std::runtime_error {
 public:
  UnparseableResponse(const std::string& what, size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  // Byte offset of the first parse error.
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// A parsed API response. Objects have named edges, arrays have edges labelled
// 0..n-1, everything else is a leaf.
class ResponseTree {
 public:
  explicit ResponseTree(nlohmann::json root) : root_(std::move(root)) {}
  const nlohmann::json& root() const { return root_; }
  size_t LeafCount() const;

 private:
  nlohmann::json root_;
};

ResponseTree ParseResponse(std::string_view body);

enum class SegmentKind : uint8_t { kKey, kIndex, kWildcard };

struct PathSegment {
  std::string label;
  SegmentKind kind = SegmentKind::kKey;
  auto operator<=>(const PathSegment&) const = default;
};

inline constexpr std::string_view kWildcard = "*";

// Root-to-leaf label sequence. Array positions keep their index until
// generalized, so numeric object keys stay distinguishable from indices.
struct ResponsePath {
  std::vector<PathSegment> segments;

  size_t length() const { return segments.size(); }
  size_t branch_count() const;
  std::string ToString() const;
  auto operator<=>(const ResponsePath&) const = default;
};

enum class LeafKind : uint8_t { kString, kNumber, kBoolean, kNull };

struct LeafValue {
  LeafKind kind = LeafKind::kNull;
  // Text form: the string itself, the JSON number text, "true"/"false", or "".
  std::string text;
};

struct PathValuePair {
  ResponsePath path;
  LeafValue value;
};

std::vector<PathValuePair> Flatten(const ResponseTree& tree);

// Replaces every array index with the wildcard token. Idempotent.
ResponsePath Generalize(const ResponsePath& path);

inline size_t PathLength(const ResponsePath& path) { return path.length(); }

// Follows the segments from the root; nullptr when the path does not exist.
const nlohmann::json* Replay(const ResponseTree& tree, const ResponsePath& path);

// Parses "a.0.b" style strings; digits become indices, "*" a wildcard.
ResponsePath ParseResponsePath(std::string_view text);

}  // namespace linkpoint

#endif  // LINKPOINT_RESPONSE_MODEL_H_
