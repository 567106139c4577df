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

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cloudnet {

/// Milliseconds since the Unix epoch. All contract timestamps use this.
using TimestampMs = std::int64_t;

inline TimestampMs now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

/// Injectable clock so expiry behaviour is testable without sleeping.
using ClockFn = std::function<TimestampMs()>;

/// Canonical decimal rendering of an amount (shortest round-trip form).
std::string format_amount(double value);

/// Parses what format_amount produced. Throws std::invalid_argument.
double parse_amount(const std::string& text);

/// FNV-1a 64-bit, hex-encoded. Stable across platforms; used for the
/// durable log's payload addressing.
std::string fnv1a_hex(const std::string& data);

std::vector<std::string> split(const std::string& text, char sep);

}  // namespace cloudnet
