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

#include <optional>
#include <string>
#include <vector>

#include "cloudnet/common/util.hpp"

namespace cloudnet {

/// Append-only event journal. `events.log` holds one
/// `<timestamp>;<event>;<payload-hash>` line per state transition; the full
/// payload sits content-addressed under `payloads/<hash>` so a restarting
/// daemon can replay its history.
class DurableLog {
 public:
  /// Opens (creating directories as needed). No-op object when `dir` is empty.
  explicit DurableLog(std::string dir);

  void append(const std::string& event, const std::string& payload, TimestampMs ts);

  struct Entry {
    TimestampMs ts;
    std::string event;
    std::string payload;
  };

  /// Reads the whole journal back, resolving payloads by hash.
  std::vector<Entry> read_all() const;

  bool enabled() const { return !dir_.empty(); }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
};

}  // namespace cloudnet
