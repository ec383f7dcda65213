// Copyright 2026 The TangentLab Authors
//
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

// Internal: JSON output with doubles at 17 significant digits.
#pragma once

#include <string>

#include "json.hpp"

namespace tangentlab::detail {

/// Serializes `value` with stable key order (nlohmann sorts object keys) and
/// every floating-point number written as %.17g.
std::string dump17(const nlohmann::json& value, int indent = 2);

/// %.17g, with non-finite values spelled as strings.
std::string format17(double x);

}  // namespace tangentlab::detail
