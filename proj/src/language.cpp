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

#include "xalign/language.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "xalign/error.hpp"

namespace xalign {
namespace {

// Sorted by code for binary search.
constexpr std::array<std::pair<std::string_view, std::string_view>, 48>
    kDisplayNames{{
        {"abs", "Ambonese Malay"},
        {"ace", "Acehnese"},
        {"amh", "Amharic"},
        {"arq", "Algerian Arabic"},
        {"ary", "Moroccan Arabic"},
        {"aym", "Aymara"},
        {"ban", "Balinese"},
        {"bbc", "Toba Batak"},
        {"bew", "Betawi"},
        {"bhp", "Bima"},
        {"bjn", "Banjarese"},
        {"btk", "Batak"},
        {"bug", "Buginese"},
        {"bzd", "Bribri"},
        {"cni", "Ashaninka"},
        {"deu", "German"},
        {"eng", "English"},
        {"fra", "French"},
        {"grn", "Guarani"},
        {"hau", "Hausa"},
        {"hch", "Wixarika"},
        {"ibo", "Igbo"},
        {"ind", "Indonesian"},
        {"ita", "Italian"},
        {"jav", "Javanese"},
        {"lug", "Luganda"},
        {"mad", "Madurese"},
        {"mak", "Makassarese"},
        {"mar", "Marathi"},
        {"min", "Minangkabau"},
        {"mui", "Musi"},
        {"nah", "Nahuatl"},
        {"nij", "Ngaju"},
        {"oto", "Otomi"},
        {"pcm", "Nigerian Pidgin"},
        {"por", "Portuguese"},
        {"quy", "Quechua"},
        {"rej", "Rejang"},
        {"shp", "Shipibo-Konibo"},
        {"sna", "Shona"},
        {"spa", "Spanish"},
        {"sun", "Sundanese"},
        {"swa", "Swahili"},
        {"tar", "Raramuri"},
        {"tel", "Telugu"},
        {"xho", "Xhosa"},
        {"yor", "Yoruba"},
        {"zul", "Zulu"},
    }};

static_assert(std::is_sorted(kDisplayNames.begin(), kDisplayNames.end()));

}  // namespace

LanguageTag::LanguageTag(std::string_view code) {
  if (!is_valid(code)) {
    throw ValidationError("invalid language tag \"" + std::string(code) +
                          "\" (expected 3 lowercase ASCII letters)");
  }
  code_ = std::string(code);
}

bool LanguageTag::is_valid(std::string_view code) noexcept {
  return code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) {
           return c >= 'a' && c <= 'z';
         });
}

std::optional<std::string> find_display_name(const LanguageTag& tag) {
  const auto it = std::lower_bound(
      kDisplayNames.begin(), kDisplayNames.end(), tag.code(),
      [](const auto& entry, const std::string& code) { return entry.first < code; });
  if (it == kDisplayNames.end() || it->first != tag.code()) return std::nullopt;
  return std::string(it->second);
}

std::string display_name(const LanguageTag& tag) {
  auto name = find_display_name(tag);
  if (!name) {
    throw ValidationError("no display name registered for language tag \"" +
                          tag.code() + "\"");
  }
  return *name;
}

}  // namespace xalign
