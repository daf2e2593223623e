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


#include "spectradec/kan_json.hpp"

#include <fstream>

namespace spectradec::nn {
namespace {

using nlohmann::json;

template <typename Derived>
json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Matrix>
Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + " must be a non-empty array of rows");
  }
  const size_t cols = j[0].size();
  Matrix m(Eigen::Index(j.size()), Eigen::Index(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw Error(ErrorCode::kParseError, std::string(what) + " rows differ in length");
    }
    for (size_t c = 0; c < cols; ++c) m(Eigen::Index(i), Eigen::Index(c)) = j[i][c].get<double>();
  }
  return m;
}

}  // namespace

json stack_to_json(const FwKanStack& stack) {
  json layers = json::array();
  for (const KanLayer& layer : stack.layers()) {
    json bias = json::array();
    for (double b : layer.linear.bias) bias.push_back(b);
    layers.push_back({{"numerator", matrix_to_json(layer.activation.numerator())},
                      {"denominator", matrix_to_json(layer.activation.denominator())},
                      {"weight", matrix_to_json(layer.linear.weight)},
                      {"bias", bias}});
  }
  return {{"window_len", stack.window_len()},
          {"seed", stack.seed()},
          {"layers", layers}};
}

FwKanStack stack_from_json(const json& doc) {
  using Coeffs = RationalActivation<double>::Coeffs;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kParseError, "stack must be an object");
    if (doc.contains("identity")) {
      const json& id = doc.at("identity");
      return FwKanStack::identity(id.at("window_len").get<int>(),
                                  id.value("depth", 1));
    }
    const int window_len = doc.at("window_len").get<int>();
    std::vector<KanLayer> layers;
    for (const json& l : doc.at("layers")) {
      Coeffs a = matrix_from_json<Coeffs>(l.at("numerator"), "numerator");
      Coeffs b;
      const json& den = l.at("denominator");
      // A denominator of order zero serializes as rows of empty arrays.
      if (den.is_array() && !den.empty() && den[0].is_array() && den[0].empty()) {
        b = Coeffs::Zero(Eigen::Index(den.size()), 0);
      } else {
        b = matrix_from_json<Coeffs>(den, "denominator");
      }
      LinearMap linear;
      linear.weight = matrix_from_json<Eigen::MatrixXd>(l.at("weight"), "weight");
      const json& bias = l.at("bias");
      linear.bias.resize(Eigen::Index(bias.size()));
      for (size_t i = 0; i < bias.size(); ++i) linear.bias[Eigen::Index(i)] = bias[i].get<double>();
      layers.push_back({RationalActivation<double>(std::move(a), std::move(b)),
                        std::move(linear)});
    }
    FwKanStack stack(window_len, std::move(layers), doc.value("seed", std::uint64_t{0}));
    stack.validate();
    return stack;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("stack: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) {
      throw Error(ErrorCode::kParseError, e.what());
    }
    throw;
  }
}

std::vector<FwKanStack> read_stacks(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  std::vector<FwKanStack> stacks;
  if (doc.is_array()) {
    for (const json& s : doc) stacks.push_back(stack_from_json(s));
  } else {
    stacks.push_back(stack_from_json(doc));
  }
  return stacks;
}

}  // namespace spectradec::nn
