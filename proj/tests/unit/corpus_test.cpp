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

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xalign/corpus.hpp"
#include "xalign/error.hpp"
#include "xalign/language.hpp"

namespace xalign {
namespace {

std::filesystem::path label_sets_path() {
  return testing::source_dir() / "data" / "label_sets.json";
}

LabeledDataset parse_jsonl(const std::string& text, const LabelRegistry* registry = nullptr,
                           std::string_view task = {}) {
  std::istringstream in(text);
  return parse_labeled(in, "test", FileFormat::jsonl, registry, task);
}

TEST(Corpus, MinimalLabeledRecord) {
  const auto ds =
      parse_jsonl(R"({"id":"a","text":"bagus","lang":"ind","label":"positive"})" "\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].id, "a");
  EXPECT_EQ(ds[0].lang.code(), "ind");
  EXPECT_EQ(ds[0].label, "positive");
}

TEST(Corpus, EmptyFileIsEmptyDataset) { EXPECT_TRUE(parse_jsonl("").empty()); }

TEST(Corpus, InvalidLanguageTagIsRejected) {
  try {
    parse_jsonl(R"({"id":"a","text":"bagus","lang":"indonesian","label":"positive"})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("invalid language tag"), std::string::npos);
  }
}

TEST(Corpus, ParseErrorCarriesLineNumber) {
  try {
    parse_jsonl(R"({"id":"a","text":"x","lang":"ind"})" "\n{broken\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Corpus, DuplicateIdNamesTheRecord) {
  EXPECT_THROW(parse_jsonl(R"({"id":"a","text":"x","lang":"ind"})" "\n"
                           R"({"id":"a","text":"y","lang":"ind"})" "\n"),
               ValidationError);
}

TEST(Corpus, TsvWithHeader) {
  std::istringstream in("id\ttext\tlang\tlabel\nx1\tbagus sekali\tind\tpositif\n");
  const auto ds = parse_labeled(in, "t.tsv", FileFormat::tsv);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].text, "bagus sekali");
  EXPECT_EQ(format_from_path("a/b.tsv"), FileFormat::tsv);
  EXPECT_EQ(format_from_path("a/b.jsonl"), FileFormat::jsonl);
}

TEST(Corpus, LabeledRoundTrip) {
  const std::string text =
      R"({"id":"b","text":"buruk","lang":"ind","label":"negatif"})" "\n"
      R"({"id":"a","text":"café \"ok\"","lang":"fra","label":""})" "\n";
  const auto first = parse_jsonl(text);
  std::ostringstream out;
  write_labeled_jsonl(out, first);
  EXPECT_EQ(parse_jsonl(out.str()), first);
}

TEST(Corpus, ParallelPair) {
  std::istringstream in(
      R"({"id":"p1","src_lang":"eng","tgt_lang":"ind","src_text":"hello","tgt_text":"halo"})");
  const auto pairs = parse_parallel(in, "p", FileFormat::jsonl);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].tgt_text, "halo");
  std::ostringstream out;
  write_parallel_jsonl(out, pairs);
  std::istringstream again(out.str());
  EXPECT_EQ(parse_parallel(again, "p", FileFormat::jsonl), pairs);
}

TEST(Corpus, ParallelSameLanguageIsRejected) {
  std::istringstream in(
      R"({"id":"p1","src_lang":"ind","tgt_lang":"ind","src_text":"a","tgt_text":"b"})");
  EXPECT_THROW(parse_parallel(in, "p", FileFormat::jsonl), ValidationError);
}

TEST(Corpus, FixtureCorpusCountMatchesLineCount) {
  const auto path = testing::data_dir() / "parallel_200.jsonl";
  const std::string raw = testing::slurp(path);
  const auto lines = static_cast<std::size_t>(std::count(raw.begin(), raw.end(), '\n'));
  const auto pairs = load_parallel(path, FileFormat::jsonl);
  EXPECT_EQ(pairs.size(), lines);
  std::set<std::string> ids;
  for (const auto& p : pairs) ids.insert(p.id);
  EXPECT_EQ(ids.size(), pairs.size());
}

TEST(Lexicon, SingleEntry) {
  std::istringstream in("#src=ind\ttgt=eng\nmakan\teat\n");
  const auto lex = parse_lexicon(in, "lex");
  ASSERT_EQ(lex.entries.size(), 1u);
  EXPECT_EQ(lex.src_lang.code(), "ind");
  EXPECT_EQ(lex.entries[0].tgt_word, "eat");
}

TEST(Lexicon, DuplicateSourceWordDependsOnMode) {
  const std::string text = "#src=ind\ttgt=eng\nmakan\teat\nmakan\tmeal\n";
  std::istringstream single(text);
  EXPECT_THROW(parse_lexicon(single, "lex"), ParseError);
  std::istringstream multi(text);
  EXPECT_EQ(parse_lexicon(multi, "lex", LexiconMode::multi_sense).entries.size(), 2u);
}

TEST(Lexicon, MalformedRowReportsRow) {
  std::istringstream in("#src=ind\ttgt=eng\nmakan\teat\nminum\n");
  try {
    parse_lexicon(in, "lex");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Lexicon, HundredRowsGiveHundredEntries) {
  std::string text = "#src=ind\ttgt=eng\n";
  for (int i = 0; i < 100; ++i) {
    text += "kata" + std::to_string(i) + "\tword" + std::to_string(i) + "\n";
  }
  std::istringstream in(text);
  EXPECT_EQ(parse_lexicon(in, "lex").entries.size(), 100u);
}

TEST(LabelSets, ShippedSentimentSets) {
  const auto registry = LabelRegistry::load(label_sets_path());
  EXPECT_EQ(registry.at("sentiment", LanguageTag("fra")).labels,
            (std::vector<std::string>{"négatif", "neutre", "positif"}));
  EXPECT_EQ(registry.at("sentiment", LanguageTag("eng")).labels,
            (std::vector<std::string>{"negative", "neutral", "positive"}));
}

TEST(LabelSets, UnregisteredLanguagesAreDistinctFromUnknown) {
  const auto registry = LabelRegistry::load(label_sets_path());
  EXPECT_EQ(registry.status("americasnli", LanguageTag("bzd")),
            LabelRegistry::Status::unregistered);
  EXPECT_EQ(registry.status("americasnli", LanguageTag("zzz")), LabelRegistry::Status::unknown);
  try {
    registry.at("americasnli", LanguageTag("bzd"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("label set unregistered"), std::string::npos);
  }
}

TEST(LabelSets, UnequalLengthsAreRejected) {
  EXPECT_THROW(LabelRegistry::parse(R"({"sentiment": {"fra": ["négatif","neutre","positif"],
                                                      "deu": ["negativ","positiv"]}})"),
               ValidationError);
}

TEST(LabelSets, DashListMarksUnregistered) {
  const auto registry =
      LabelRegistry::parse(R"({"nli": {"eng": ["yes","no"], "bzd": ["-","-"]}})");
  EXPECT_EQ(registry.status("nli", LanguageTag("bzd")), LabelRegistry::Status::unregistered);
}

TEST(LabelSets, LoaderChecksLabelsAgainstRegistry) {
  const auto registry = LabelRegistry::parse(R"({"sentiment": {"ind": ["negatif","netral","positif"]}})");
  EXPECT_NO_THROW(parse_jsonl(R"({"id":"a","text":"x","lang":"ind","label":"positif"})",
                              &registry, "sentiment"));
  EXPECT_THROW(parse_jsonl(R"({"id":"a","text":"x","lang":"ind","label":"positive"})",
                           &registry, "sentiment"),
               ValidationError);
}

TEST(Language, DisplayNames) {
  EXPECT_EQ(display_name(LanguageTag("fra")), "French");
  EXPECT_EQ(display_name(LanguageTag("ind")), "Indonesian");
  EXPECT_EQ(display_name(LanguageTag("eng")), "English");
  EXPECT_THROW(LanguageTag("EN"), ValidationError);
}

}  // namespace
}  // namespace xalign
