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

#include "cloudnet/rdl/type_path.hpp"

#include "cloudnet/common/errors.hpp"

namespace cloudnet::rdl {

namespace {

constexpr char kWildcard[] = "generic";

bool valid_segment_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

}  // namespace

std::string TypePath::to_string() const {
  std::string out;
  for (const auto& seg : segments_) {
    out += '/';
    out += seg;
  }
  return out;
}

bool TypePath::is_prefix_of(const TypePath& other) const {
  if (segments_.size() > other.segments_.size()) return false;
  for (std::size_t i = 0; i < segments_.size(); ++i)
    if (segments_[i] != other.segments_[i]) return false;
  return true;
}

TypePath parse_type_path(const std::string& text) {
  if (text.empty() || text.front() != '/')
    throw MalformedPath("missing leading '/' in '" + text + "'");
  std::vector<std::string> segments;
  std::string current;
  for (std::size_t i = 1; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '/') {
      if (current.empty())
        throw MalformedPath("empty segment in '" + text + "'");
      segments.push_back(current);
      current.clear();
      continue;
    }
    if (!valid_segment_char(text[i]))
      throw MalformedPath("illegal character '" + std::string(1, text[i]) +
                          "' in '" + text + "'");
    current += text[i];
  }
  return TypePath(std::move(segments));
}

bool is_assignable(const TypePath& request, const TypePath& substrate) {
  if (request == substrate) return true;
  if (request.empty() || request.back() != kWildcard) return false;
  const std::size_t prefix = request.size() - 1;
  if (substrate.size() < prefix) return false;
  for (std::size_t i = 0; i < prefix; ++i)
    if (request.segments()[i] != substrate.segments()[i]) return false;
  return true;
}

}  // namespace cloudnet::rdl
