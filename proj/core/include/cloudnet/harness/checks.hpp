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

#include "cloudnet/pip/node.hpp"

namespace cloudnet::harness {

/// Conservation: per substrate element and kind, the live contracts' summed
/// allocations plus the residual must equal the declared capacity; VLAN tags
/// must map to at most one live link. Returns the first discrepancy.
std::optional<std::string> conservation_violation(const pip::PipNode& node);

}  // namespace cloudnet::harness
