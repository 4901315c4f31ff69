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

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace xalign {

/// ISO 639-3 language code: exactly three lowercase ASCII letters.
class LanguageTag {
 public:
  LanguageTag() = default;
  /// Throws ValidationError("invalid language tag ...") on a malformed code.
  explicit LanguageTag(std::string_view code);

  static bool is_valid(std::string_view code) noexcept;

  const std::string& code() const noexcept { return code_; }
  bool empty() const noexcept { return code_.empty(); }

  auto operator<=>(const LanguageTag&) const = default;

 private:
  std::string code_;
};

/// English display name used inside prompts ("fra" -> "French").
std::optional<std::string> find_display_name(const LanguageTag& tag);

/// Same as find_display_name but throws ValidationError for unknown tags.
std::string display_name(const LanguageTag& tag);

}  // namespace xalign

template <>
struct std::hash<xalign::LanguageTag> {
  std::size_t operator()(const xalign::LanguageTag& tag) const noexcept {
    return std::hash<std::string>{}(tag.code());
  }
};
