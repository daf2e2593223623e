// Copyright 2026 The Spectradec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <filesystem>
#include <vector>

#include "json.hpp"
#include "spectradec/neural.hpp"

namespace spectradec::nn {

// {"window_len": L, "seed": s, "layers": [{"numerator": [[...]],
// "denominator": [[...]], "weight": [[...]], "bias": [...]}]}
nlohmann::json stack_to_json(const FwKanStack& stack);

// Accepts the layout above, or {"identity": {"window_len": L, "depth": d}}.
// Throws ParseError on malformed input and IncompatibleStack on width
// mismatches.
FwKanStack stack_from_json(const nlohmann::json& doc);

// A file holds one stack object or an array of them.
std::vector<FwKanStack> read_stacks(const std::filesystem::path& path);

}  // namespace spectradec::nn
