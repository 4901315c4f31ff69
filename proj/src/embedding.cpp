// Copyright 2026 The xalign Authors.
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

#include "xalign/embedding.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

namespace xalign {

DenseVector::DenseVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("dense vector must have dim > 0");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("dense vector has a non-finite value");
  }
}

double DenseVector::norm() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

FileEmbeddingProvider FileEmbeddingProvider::parse(std::istream& in,
                                                   std::string_view source_name) {
  const std::string source(source_name);
  FileEmbeddingProvider provider;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, number, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object() || !record.contains("key") || !record["key"].is_string() ||
        !record.contains("vector") || !record["vector"].is_array()) {
      throw ParseError(source, number, "expected {\"key\": str, \"vector\": [float]}");
    }
    std::vector<double> values;
    for (const auto& v : record["vector"]) {
      if (!v.is_number()) throw ParseError(source, number, "vector entries must be numbers");
      values.push_back(v.get<double>());
    }
    try {
      provider.insert(record["key"].get<std::string>(), DenseVector(std::move(values)));
    } catch (const ValidationError& e) {
      throw ParseError(source, number, e.what());
    }
  }
  return provider;
}

FileEmbeddingProvider FileEmbeddingProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return parse(in, path.string());
}

void FileEmbeddingProvider::insert(std::string key, DenseVector vector) {
  vectors_.insert_or_assign(std::move(key), std::move(vector));
}

DenseVector FileEmbeddingProvider::embed(const std::string& key,
                                         const std::string& /*text*/) const {
  const auto it = vectors_.find(key);
  if (it == vectors_.end()) throw MissingEmbeddingError(key);
  return it->second;
}

}  // namespace xalign
