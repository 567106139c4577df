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

#include "cloudnet/common/durable_log.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloudnet/common/errors.hpp"

namespace cloudnet {

namespace fs = std::filesystem;

DurableLog::DurableLog(std::string dir) : dir_(std::move(dir)) {
  if (dir_.empty()) return;
  fs::create_directories(fs::path(dir_) / "payloads");
}

void DurableLog::append(const std::string& event, const std::string& payload,
                        TimestampMs ts) {
  if (dir_.empty()) return;
  const std::string hash = fnv1a_hex(payload);
  const fs::path payload_path = fs::path(dir_) / "payloads" / hash;
  if (!fs::exists(payload_path)) {
    std::ofstream out(payload_path, std::ios::binary);
    out << payload;
  }
  std::ofstream log(fs::path(dir_) / "events.log", std::ios::app);
  log << ts << ';' << event << ';' << hash << '\n';
}

std::vector<DurableLog::Entry> DurableLog::read_all() const {
  std::vector<Entry> entries;
  if (dir_.empty()) return entries;
  const fs::path log_path = fs::path(dir_) / "events.log";
  if (!fs::exists(log_path)) return entries;

  std::ifstream log(log_path);
  std::string line;
  while (std::getline(log, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ';');
    if (parts.size() != 3) throw ConfigError("corrupt log line: " + line);
    Entry entry;
    entry.ts = std::stoll(parts[0]);
    entry.event = parts[1];
    std::ifstream payload(fs::path(dir_) / "payloads" / parts[2], std::ios::binary);
    if (!payload) throw ConfigError("missing log payload " + parts[2]);
    std::ostringstream buf;
    buf << payload.rdbuf();
    entry.payload = buf.str();
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace cloudnet
