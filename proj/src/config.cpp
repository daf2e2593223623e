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


#include "spectradec/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "spectradec/error.hpp"

namespace spectradec::config {
namespace {

using nlohmann::json;

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kParseError,
                "config line " + std::to_string(line_) + ": " + msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string key() {
    skip_space();
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '-' || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  json value() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '"') return string();
    if (c == '[') return array();
    const size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != '#' && text_[pos_] != ' ' && text_[pos_] != '\t') {
      ++pos_;
    }
    return scalar(text_.substr(start, pos_ - start));
  }

 private:
  json string() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("dangling escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out.push_back(c);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  json array() {
    ++pos_;  // '['
    json out = json::array();
    if (consume(']')) return out;
    while (true) {
      out.push_back(value());
      if (consume(']')) return out;
      if (!consume(',')) fail("expected ',' or ']' in array");
      if (consume(']')) return out;  // trailing comma
    }
  }

  json scalar(std::string_view tok) {
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    if (tok == "nan" || tok == "+nan" || tok == "-nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
    std::string clean;
    for (char ch : tok) {
      if (ch != '_') clean.push_back(ch);
    }
    std::string_view s = clean;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) fail("empty value");
    const bool is_float = s.find_first_of(".eE") != std::string_view::npos;
    if (!is_float) {
      std::int64_t i = 0;
      const auto r = std::from_chars(s.data(), s.data() + s.size(), i);
      if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return i;
    } else {
      double d = 0;
      const auto r = std::from_chars(s.data(), s.data() + s.size(), d);
      if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return d;
    }
    fail("cannot parse value '" + std::string(tok) + "'");
  }

  std::string_view text_;
  int line_;
  size_t pos_ = 0;
};

json& descend(json& root, const std::string& dotted, int line) {
  json* node = &root;
  std::istringstream parts(dotted);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) {
      throw Error(ErrorCode::kParseError,
                  "config line " + std::to_string(line) + ": empty name segment");
    }
    json& next = (*node)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) {
      throw Error(ErrorCode::kParseError, "config line " + std::to_string(line) +
                                              ": '" + part + "' is not a table");
    }
    node = &next;
  }
  return *node;
}

}  // namespace

nlohmann::json parse(std::string_view text) {
  json root = json::object();
  json* table = &root;
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;

    LineParser p(line, line_no);
    if (p.at_end()) continue;
    if (p.consume('[')) {
      const std::string name = p.key();
      if (!p.consume(']')) p.fail("expected ']'");
      if (!p.at_end()) p.fail("trailing characters after table header");
      table = &descend(root, name, line_no);
      continue;
    }
    const std::string key = p.key();
    if (!p.consume('=')) p.fail("expected '=' after key '" + key + "'");
    json value = p.value();
    if (!p.at_end()) p.fail("trailing characters after value");
    const size_t dot = key.rfind('.');
    json& target = dot == std::string::npos
                       ? *table
                       : descend(*table, key.substr(0, dot), line_no);
    const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    if (target.contains(leaf)) p.fail("duplicate key '" + key + "'");
    target[leaf] = std::move(value);
    if (end == text.size()) break;
  }
  return root;
}

nlohmann::json read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const nlohmann::json* find(const nlohmann::json& root, std::string_view dotted) {
  const json* node = &root;
  size_t start = 0;
  while (start <= dotted.size()) {
    size_t dot = dotted.find('.', start);
    if (dot == std::string_view::npos) dot = dotted.size();
    const std::string part(dotted.substr(start, dot - start));
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
    start = dot + 1;
    if (dot == dotted.size()) break;
  }
  return node;
}

}  // namespace spectradec::config
