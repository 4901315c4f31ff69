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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xalign/error.hpp"

namespace xalign {

/// Fixed-length vector of finite reals.
class DenseVector {
 public:
  DenseVector() = default;
  /// Throws ValidationError when empty or when any value is not finite.
  explicit DenseVector(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double norm() const noexcept;

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> values_;
};

class MissingEmbeddingError : public Error {
 public:
  explicit MissingEmbeddingError(const std::string& key)
      : Error("missing embedding for " + key), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Source of dense vectors. Keys follow these conventions:
///   labeled example       -> its id
///   parallel pair side    -> "<pair id>/src", "<pair id>/tgt"
///   translated query      -> "<query id>/mt"
///   lexicon word          -> "<lang>:<word>"
/// Remote providers embed `text` and may ignore `key`. Implementations must
/// be safe for concurrent calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual DenseVector embed(const std::string& key, const std::string& text) const = 0;
};

/// Vectors loaded from JSONL lines {"key": str, "vector": [float, ...]}.
class FileEmbeddingProvider : public EmbeddingProvider {
 public:
  static FileEmbeddingProvider load(const std::filesystem::path& path);
  static FileEmbeddingProvider parse(std::istream& in, std::string_view source_name);

  void insert(std::string key, DenseVector vector);
  bool contains(const std::string& key) const { return vectors_.count(key) != 0; }
  std::size_t size() const noexcept { return vectors_.size(); }

  /// Looks up `key`; throws MissingEmbeddingError when absent.
  DenseVector embed(const std::string& key, const std::string& text) const override;

 private:
  std::unordered_map<std::string, DenseVector> vectors_;
};

}  // namespace xalign
