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

namespace linkpoint {

namespace {

size_t CountLeaves(const nlohmann::json& node) {
  if (node.is_object() || node.is_array()) {
    size_t n = 0;
    for (const auto& child : node) n += CountLeaves(child);
    return n;
  }
  return 1;
}

LeafValue ToLeaf(const nlohmann::json& node) {
  switch (node.type()) {
    case nlohmann::json::value_t::string:
      return {LeafKind::kString, node.get<std::string>()};
    case nlohmann::json::value_t::boolean:
      return {LeafKind::kBoolean, node.get<bool>() ? "true" : "false"};
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
    case nlohmann::json::value_t::number_float:
      return {LeafKind::kNumber, node.dump()};
    default:
      return {LeafKind::kNull, ""};
  }
}

void FlattenInto(const nlohmann::json& node, ResponsePath& prefix,
                 std::vector<PathValuePair>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      prefix.segments.push_back({it.key(), SegmentKind::kKey});
      FlattenInto(it.value(), prefix, out);
      prefix.segments.pop_back();
    }
  } else if (node.is_array()) {
    for (size_t i = 0; i < node.size(); ++i) {
      prefix.segments.push_back({std::to_string(i), SegmentKind::kIndex});
      FlattenInto(node[i], prefix, out);
      prefix.segments.pop_back();
    }
  } else {
    out.push_back({prefix, ToLeaf(node)});
  }
}

}  // namespace

size_t ResponseTree::LeafCount() const {
  // An empty container at the root still has no leaves.
  return CountLeaves(root_);
}

ResponseTree ParseResponse(std::string_view body) {
  try {
    return ResponseTree(nlohmann::json::parse(body.begin(), body.end()));
  } catch (const nlohmann::json::parse_error& e) {
    throw UnparseableResponse(std::string("unparseable response: ") + e.what(), e.byte);
  }
}

size_t ResponsePath::branch_count() const {
  return static_cast<size_t>(std::count_if(segments.begin(), segments.end(), [](const auto& s) {
    return s.kind != SegmentKind::kKey;
  }));
}

std::string ResponsePath::ToString() const {
  std::string out;
  for (size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '.';
    out += segments[i].label;
  }
  return out;
}

std::vector<PathValuePair> Flatten(const ResponseTree& tree) {
  std::vector<PathValuePair> out;
  ResponsePath prefix;
  FlattenInto(tree.root(), prefix, out);
  return out;
}

ResponsePath Generalize(const ResponsePath& path) {
  ResponsePath out = path;
  for (auto& seg : out.segments) {
    if (seg.kind == SegmentKind::kIndex) seg = {std::string(kWildcard), SegmentKind::kWildcard};
  }
  return out;
}

const nlohmann::json* Replay(const ResponseTree& tree, const ResponsePath& path) {
  const nlohmann::json* node = &tree.root();
  for (const auto& seg : path.segments) {
    if (seg.kind == SegmentKind::kKey) {
      if (!node->is_object()) return nullptr;
      auto it = node->find(seg.label);
      if (it == node->end()) return nullptr;
      node = &*it;
    } else if (seg.kind == SegmentKind::kIndex) {
      if (!node->is_array()) return nullptr;
      size_t i = std::stoul(seg.label);
      if (i >= node->size()) return nullptr;
      node = &(*node)[i];
    } else {
      return nullptr;
    }
  }
  return node;
}

ResponsePath ParseResponsePath(std::string_view text) {
  ResponsePath out;
  if (text.empty()) return out;
  size_t start = 0;
  for (;;) {
    size_t dot = text.find('.', start);
    std::string_view part = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
    PathSegment seg{std::string(part), SegmentKind::kKey};
    if (part == kWildcard) {
      seg.kind = SegmentKind::kWildcard;
    } else if (!part.empty() &&
               std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      seg.kind = SegmentKind::kIndex;
    }
    out.segments.push_back(std::move(seg));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

}  // namespace linkpoint
