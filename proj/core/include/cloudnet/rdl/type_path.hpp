// Copyright 2026 The CloudNet Authors
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

#pragma once

#include <compare>
#include <string>
#include <vector>

namespace cloudnet::rdl {

/// Hierarchical type of a network element, written like a Unix path
/// (`/node/host/generic`). The path drives both which substrate elements a
/// request element may be placed on and which embedding plugin provisions it.
class TypePath {
 public:
  TypePath() = default;
  explicit TypePath(std::vector<std::string> segments)
      : segments_(std::move(segments)) {}

  const std::vector<std::string>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  const std::string& front() const { return segments_.front(); }
  const std::string& back() const { return segments_.back(); }

  std::string to_string() const;

  /// True when this path is a segment-wise prefix of `other` (or equal).
  bool is_prefix_of(const TypePath& other) const;

  auto operator<=>(const TypePath&) const = default;

 private:
  std::vector<std::string> segments_;
};

/// Parses the canonical `/seg1/seg2/...` form. Segments are non-empty and
/// match `[a-z0-9_-]+`. Throws MalformedPath otherwise.
TypePath parse_type_path(const std::string& text);

/// Decides whether a substrate element of type `substrate` can host a request
/// element of type `request`. True iff the paths are equal, or the request
/// ends in the wildcard segment `generic` and everything before the wildcard
/// matches the front of the substrate path (the substrate may be deeper).
bool is_assignable(const TypePath& request, const TypePath& substrate);

}  // namespace cloudnet::rdl
