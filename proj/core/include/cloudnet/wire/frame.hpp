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

#include <cstdint>
#include <string>
#include <vector>

namespace cloudnet::wire {

/// Every method a role may serve. Unknown methods are answered with an
/// `unknown_method` error by servers; this list is the protocol's surface.
const std::vector<std::string>& method_registry();
bool known_method(const std::string& method);

struct Message {
  enum class Kind { Request, Response };

  Kind kind = Kind::Request;
  std::uint64_t correlation_id = 0;
  std::string method;  // requests only
  std::string status;  // responses only: "ok" or an error code
  std::string body;

  bool ok() const { return status == "ok"; }
};

/// Frame layout: a 4-byte big-endian payload length, then the payload. The
/// payload is `REQ <method> <id>` or `RSP <status> <id>`, a newline, a blank
/// line, then the raw body bytes. docs/protocol.md is normative.
/// Throws BodyTooLarge when the body exceeds 2^31 - 1 bytes.
std::string encode_frame(const Message& m);

/// Inverse of encode_frame, without the length prefix (transport strips it).
/// Throws FrameError on malformed payloads.
Message decode_payload(const std::string& payload);

/// Splits off one length-prefixed frame from `buffer` if complete. Returns
/// true and erases the consumed bytes when a full frame was present.
bool take_frame(std::string& buffer, std::string& payload_out);

}  // namespace cloudnet::wire
