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

#include "cloudnet/wire/frame.hpp"

#include <charconv>
#include <limits>

#include "cloudnet/common/errors.hpp"

namespace cloudnet::wire {

const std::vector<std::string>& method_registry() {
  static const std::vector<std::string> kMethods = {
      "sync_resources",      "negotiate_preliminary", "negotiate_modify",
      "negotiate_confirm",   "negotiate_delete",      "provision_start",
      "provision_stop",      "provision_powercycle",  "console_lookup",
      "submit_cloudnet",     "cloudnet_status",       "cloudnet_delete",
      "migrate_analyze",
  };
  return kMethods;
}

bool known_method(const std::string& method) {
  for (const auto& m : method_registry())
    if (m == method) return true;
  return false;
}

std::string encode_frame(const Message& m) {
  if (m.body.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
    throw BodyTooLarge(std::to_string(m.body.size()) + " bytes");

  std::string payload;
  payload += m.kind == Message::Kind::Request ? "REQ " : "RSP ";
  payload += m.kind == Message::Kind::Request ? m.method : m.status;
  payload += ' ';
  payload += std::to_string(m.correlation_id);
  payload += "\n\n";
  payload += m.body;

  const std::uint32_t n = static_cast<std::uint32_t>(payload.size());
  std::string frame;
  frame.reserve(4 + payload.size());
  frame += static_cast<char>((n >> 24) & 0xff);
  frame += static_cast<char>((n >> 16) & 0xff);
  frame += static_cast<char>((n >> 8) & 0xff);
  frame += static_cast<char>(n & 0xff);
  frame += payload;
  return frame;
}

Message decode_payload(const std::string& payload) {
  const auto header_end = payload.find('\n');
  if (header_end == std::string::npos || header_end + 1 >= payload.size() ||
      payload[header_end + 1] != '\n')
    throw FrameError("missing header/body separator");

  const std::string header = payload.substr(0, header_end);
  const auto first_space = header.find(' ');
  const auto second_space =
      first_space == std::string::npos ? std::string::npos : header.find(' ', first_space + 1);
  if (first_space == std::string::npos || second_space == std::string::npos)
    throw FrameError("bad header '" + header + "'");

  Message m;
  const std::string kind = header.substr(0, first_space);
  if (kind == "REQ") {
    m.kind = Message::Kind::Request;
    m.method = header.substr(first_space + 1, second_space - first_space - 1);
  } else if (kind == "RSP") {
    m.kind = Message::Kind::Response;
    m.status = header.substr(first_space + 1, second_space - first_space - 1);
  } else {
    throw FrameError("unknown frame kind '" + kind + "'");
  }

  const std::string id_text = header.substr(second_space + 1);
  auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(),
                                   m.correlation_id);
  if (ec != std::errc() || ptr != id_text.data() + id_text.size())
    throw FrameError("bad correlation id '" + id_text + "'");

  m.body = payload.substr(header_end + 2);
  return m;
}

bool take_frame(std::string& buffer, std::string& payload_out) {
  if (buffer.size() < 4) return false;
  const std::uint32_t n = (static_cast<std::uint32_t>(static_cast<unsigned char>(buffer[0])) << 24) |
                          (static_cast<std::uint32_t>(static_cast<unsigned char>(buffer[1])) << 16) |
                          (static_cast<std::uint32_t>(static_cast<unsigned char>(buffer[2])) << 8) |
                          static_cast<std::uint32_t>(static_cast<unsigned char>(buffer[3]));
  if (buffer.size() < 4 + static_cast<std::size_t>(n)) return false;
  payload_out = buffer.substr(4, n);
  buffer.erase(0, 4 + static_cast<std::size_t>(n));
  return true;
}

}  // namespace cloudnet::wire
