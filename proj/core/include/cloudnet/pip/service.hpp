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

#include "cloudnet/pip/node.hpp"
#include "cloudnet/wire/server.hpp"

namespace cloudnet::pip {

/// Binds a PipNode to the wire: negotiation and provisioning methods with
/// JSON parameter bodies (the preliminary body is the raw partial document).
/// Method-by-method bodies are listed in docs/protocol.md.
wire::Handler make_pip_handler(PipNode& node);

}  // namespace cloudnet::pip
