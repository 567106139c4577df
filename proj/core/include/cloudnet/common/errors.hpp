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

#include <stdexcept>
#include <string>

namespace cloudnet {

/// Base of all errors raised by this library. `code()` is the stable,
/// machine-readable identifier that also travels as a wire status.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string detail)
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        code_(std::move(code)),
        detail_(std::move(detail)) {}

  const std::string& code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

#define CLOUDNET_ERROR(ClassName, code_literal)                      \
  class ClassName : public Error {                                   \
   public:                                                           \
    explicit ClassName(const std::string& detail = "")               \
        : Error(code_literal, detail) {}                             \
  }

// rdl / codec
CLOUDNET_ERROR(MalformedPath, "malformed_path");
CLOUDNET_ERROR(MalformedDocument, "malformed_document");
CLOUDNET_ERROR(InvalidGraph, "invalid_graph");
CLOUDNET_ERROR(DanglingEndpoint, "dangling_endpoint");
CLOUDNET_ERROR(ConflictingGroup, "conflicting_group");

// solver
CLOUDNET_ERROR(NoCandidates, "no_candidates");
CLOUDNET_ERROR(BudgetExceeded, "budget_exceeded");

// wire
CLOUDNET_ERROR(BodyTooLarge, "body_too_large");
CLOUDNET_ERROR(FrameError, "frame_error");
CLOUDNET_ERROR(Timeout, "timeout");
CLOUDNET_ERROR(ConnectionRefused, "connection_refused");

// pip / vnp
CLOUDNET_ERROR(VlanExhausted, "vlan_exhausted");
CLOUDNET_ERROR(UnknownNeighborPip, "unknown_neighbor_pip");
CLOUDNET_ERROR(UnknownContract, "unknown_contract");
CLOUDNET_ERROR(NotPreliminary, "not_preliminary");
CLOUDNET_ERROR(NotConfirmed, "not_confirmed");
CLOUDNET_ERROR(UnknownVNode, "unknown_vnode");
CLOUDNET_ERROR(UnknownCloudNet, "unknown_cloudnet");
CLOUDNET_ERROR(TransitVlanExhausted, "transit_vlan_exhausted");
CLOUDNET_ERROR(RollbackIncomplete, "rollback_incomplete");
CLOUDNET_ERROR(ConfigError, "config_error");

#undef CLOUDNET_ERROR

/// A negotiation-level rejection. Unlike the hard errors above it always
/// carries the application status code verbatim (e.g. "infeasible").
class Rejection : public Error {
 public:
  Rejection(std::string code, const std::string& detail)
      : Error(std::move(code), detail) {}
};

/// Error received from a remote peer over the wire.
class RemoteError : public Error {
 public:
  RemoteError(std::string code, const std::string& message)
      : Error(std::move(code), message) {}
};

}  // namespace cloudnet
