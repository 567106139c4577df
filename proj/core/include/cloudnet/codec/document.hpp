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

#include <string>
#include <variant>

#include "cloudnet/rdl/graph.hpp"
#include "cloudnet/rdl/mapping.hpp"

namespace cloudnet::codec {

/// Deterministic line-record text form of a graph or mapping (`.cng`).
/// Equal inputs serialize to byte-identical documents; the exact grammar is
/// normative and lives in docs/format.md.

/// Serializes a topology graph. The graph must validate; throws InvalidGraph
/// otherwise.
std::string serialize(const rdl::TopologyGraph& g);

/// Serializes a mapping layer (a layer=ML document of MAP records).
std::string serialize(const rdl::MappingLayer& ml);

using Decoded = std::variant<rdl::TopologyGraph, rdl::MappingLayer>;

/// Parses a `.cng` document. Throws MalformedDocument on bad headers, unknown
/// record classes, duplicate ids, or unresolved references.
Decoded deserialize(const std::string& bytes);

/// Convenience wrappers that fail when the document decodes to the other
/// variant.
rdl::TopologyGraph deserialize_graph(const std::string& bytes);
rdl::MappingLayer deserialize_mapping(const std::string& bytes);

/// Atom escaping used by the format. Exposed for tests.
std::string escape_atom(const std::string& raw);
std::string unescape_atom(const std::string& escaped);

}  // namespace cloudnet::codec
