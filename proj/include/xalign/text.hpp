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

// Unicode text utilities backed by ICU.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace xalign {

bool is_valid_utf8(std::string_view text) noexcept;

/// NFC-normalizes UTF-8 text. Invalid sequences become U+FFFD.
std::string nfc(std::string_view text);

/// Lowercased NFC tokens. A token is a maximal run of code points that are
/// neither Unicode White_Space nor in a punctuation category (P*).
std::vector<std::string> tokenize(std::string_view text);

/// Splits on Unicode White_Space only, keeping the original code points.
std::vector<std::string> split_whitespace(std::string_view text);

/// True when the token contains at least one Alphabetic code point.
bool has_alphabetic(std::string_view token);

std::size_t codepoint_count(std::string_view text) noexcept;

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace xalign
