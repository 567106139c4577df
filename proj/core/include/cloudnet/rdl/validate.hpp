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
#include <vector>

#include "cloudnet/rdl/graph.hpp"

namespace cloudnet::rdl {

enum class ViolationCode {
  BadRootSegment,            // first type segment is neither `node` nor `link`
  LinkArity,                 // link NE without exactly 2 interfaces
  DuplicateResourceKind,
  NegativeAmount,
  UnitMismatch,              // unit differs from the registry unit for the kind
  UnknownInterfaceRef,       // NE lists an NI id that does not exist
  OwnerMismatch,             // NI ownership and NE interface lists disagree
  UnknownPeer,               // peer reference does not resolve
  AsymmetricPeering,
  LinkEndpointNotNode,       // link NI unpeered or peered into a non-node
  PeerNotLink,               // node NI peered directly into another node
  UnspecifiedInCompletedGraph,  // `unspecified` feature outside OL0
  GroupValueMismatch,        // consistency group with diverging specified values
};

std::string to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string subject;  // offending NE/NI id
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks every structural invariant of the graph model. Violations are data,
/// not failures: callers decide whether a non-empty report is fatal.
ValidationReport validate_graph(const TopologyGraph& g);

}  // namespace cloudnet::rdl
