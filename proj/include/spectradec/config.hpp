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
#include <string_view>

#include "json.hpp"

namespace spectradec::config {

// Reads the TOML subset used for run configs: [section] headers, dotted
// section names, `key = value` with strings, booleans, integers, floats
// (including inf and nan), and single-line arrays of those. Comments start
// with '#'. The result is a JSON object tree; infinities are stored as
// double values. Throws ParseError with the offending line number.
nlohmann::json parse(std::string_view text);
nlohmann::json read(const std::filesystem::path& path);

// Looks up "section.key" style paths; returns nullptr when absent.
const nlohmann::json* find(const nlohmann::json& root, std::string_view dotted);

}  // namespace spectradec::config
