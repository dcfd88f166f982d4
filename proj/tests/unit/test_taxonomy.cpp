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

#include "doctest.h"
#include "ola/errors.hpp"
#include "ola/script.hpp"
#include "ola/taxonomy.hpp"
#include "ola/utf8.hpp"
#include "support.hpp"

using namespace ola;
using namespace ola::test;

namespace {

const std::set<Language> kPromptLangs{kEnglish, kKorean};

IntrusionReport scan(const std::string& text, const Language& expected = kKorean) {
  return detect_intrusions(text, expected, kPromptLangs, default_exclusions(), shipped_backend());
}

}  // namespace

TEST_SUITE("taxonomy") {
  TEST_CASE("pattern examples") {
    CHECK(classify_pattern(verdict_of({kKorean, kKorean, kKorean}), kEnglish) == FailurePattern::WrongFromStart);
    CHECK(classify_pattern(verdict_of({kEnglish, kEnglish, kKorean, kKorean, kKorean}), kEnglish) ==
          FailurePattern::WrongFromMiddle);
    CHECK(classify_pattern(verdict_of({kKorean, kEnglish, kEnglish, kEnglish}), kEnglish) ==
          FailurePattern::WrongStartRecovered);
    CHECK(classify_pattern(verdict_of({kEnglish, kKorean, kEnglish}), kEnglish) ==
          FailurePattern::CorrectWithDeviations);
    CHECK(classify_pattern(verdict_of({kEnglish, kEnglish}), kEnglish) == FailurePattern::Correct);
  }

  TEST_CASE("undetermined verdicts have no pattern") {
    CHECK_THROWS_AS(classify_pattern(ResponseLangVerdict{}, kEnglish), UndeterminedVerdict);
  }

  TEST_CASE("pattern names round-trip") {
    for (std::size_t i = 0; i < kFailurePatternCount; ++i) {
      const auto p = static_cast<FailurePattern>(i);
      CHECK(parse_failure_pattern(to_string(p)) == p);
    }
    CHECK_THROWS(parse_failure_pattern("Sideways"));
  }

  TEST_CASE("failing patterns imply a failing vote") {
    const std::vector<std::vector<Language>> seqs{
        {kKorean}, {kEnglish, kKorean}, {kKorean, kEnglish}, {kEnglish, kKorean, kKorean}, {kKorean, kKorean, kEnglish}};
    for (const auto& s : seqs) {
      const auto v = verdict_of(s);
      const auto p = classify_pattern(v, kEnglish);
      const bool pass = v.primary == kEnglish;
      if (p == FailurePattern::WrongFromStart || p == FailurePattern::WrongFromMiddle) CHECK_FALSE(pass);
      else CHECK(pass);
      if (p == FailurePattern::WrongStartRecovered) CHECK(s.front() != kEnglish);
    }
  }

  TEST_CASE("Cyrillic inside a Korean response") {
    const std::string text = "이 부분은 колон 으로 표시됩니다. 나머지는 한국어입니다.";
    const auto rep = scan(text);
    REQUIRE(rep.char_hits.size() == 1);
    const auto& h = rep.char_hits[0];
    CHECK(h.script == ScriptClass::Cyrillic);
    CHECK(h.mapped == kRussian);
    CHECK(h.text == "колон");
    CHECK(h.start == 6);
    CHECK(h.end == 11);
    CHECK(h.snippet.find("колон") != std::string::npos);
    CHECK(rep.sentence_hits.empty());
  }

  TEST_CASE("clean Korean response") {
    CHECK(scan("오늘은 날씨가 좋습니다. 산책을 가려고 합니다.").empty());
    CHECK(scan("학교(學校)에 갑니다. 漢字도 씁니다.").empty());
  }

  TEST_CASE("Japanese sentence among Korean sentences") {
    const auto rep = scan("오늘은 날씨가 좋습니다. きょうはとてもいいてんきですね。 산책을 가려고 합니다.");
    REQUIRE(rep.sentence_hits.size() == 1);
    CHECK(rep.sentence_hits[0].segment_index == 1);
    CHECK(rep.sentence_hits[0].language == kJapanese);
  }

  TEST_CASE("hits never name an excluded language") {
    const std::vector<std::string> texts{"这是中文句子，没有别的。 오늘은 좋습니다.", "The weather is nice. 날씨가 좋아요.",
                                         "Привет мир. 東京 です.", "สวัสดีครับ ทุกคน. नमस्ते दुनिया."};
    for (const auto& t : texts) {
      const auto rep = scan(t);
      for (const auto& h : rep.sentence_hits) CHECK_FALSE(default_exclusions().contains(h.language));
      for (const auto& h : rep.char_hits) {
        CHECK_FALSE(default_exclusions().contains(h.mapped));
        CHECK(h.script != ScriptClass::Han);
        for (char32_t c : utf8::decode(h.text)) CHECK(is_letter(classify_char(c)));
      }
    }
  }

  TEST_CASE("planting Cyrillic never removes hits") {
    const std::vector<std::string> texts{"오늘은 날씨가 좋습니다.", "さくら が 좋아요. 봄입니다.", "नमस्ते 친구. 잘 지내요?"};
    for (const auto& t : texts) {
      const auto before = scan(t);
      const auto after = scan(t + " 그리고 мир 입니다.");
      CHECK(after.char_hits.size() >= before.char_hits.size() + 1);
      for (const auto& h : before.char_hits)
        CHECK(std::find_if(after.char_hits.begin(), after.char_hits.end(), [&](const CharHit& a) {
                return a.start == h.start && a.end == h.end && a.mapped == h.mapped;
              }) != after.char_hits.end());
    }
  }

  TEST_CASE("intrusion summary arithmetic") {
    std::vector<std::pair<std::string, IntrusionReport>> reports{{"m", scan("이 부분은 колон 입니다.")},
                                                                 {"m", scan("오늘은 좋습니다.")}};
    auto row = intrusion_summary(reports).at("m");
    CHECK(row.incorrect.str() == "50.00");
    CHECK(row.correct().str() == "50.00");
    CHECK(row.errors() == 1);
    CHECK(row.ranking_str() == "RU (1)");

    reports = {{"m", scan("오늘은 좋습니다.")}, {"m", scan("내일도 좋습니다.")}};
    row = intrusion_summary(reports).at("m");
    CHECK(row.correct().str() == "100.00");
    CHECK(row.ranking.empty());
    CHECK(row.ranking_str().empty());
  }

  TEST_CASE("ranking orders by count") {
    std::vector<std::pair<std::string, IntrusionReport>> reports;
    for (int i = 0; i < 3; ++i) reports.push_back({"m", scan("이것은 さくら 입니다.")});
    for (int i = 0; i < 5; ++i) reports.push_back({"m", scan("이것은 мир 입니다.")});
    reports.push_back({"m", scan("이것은 नमस्ते 입니다.")});
    const auto row = intrusion_summary(reports).at("m");
    CHECK(row.ranking_str() == "RU (5), JA (3), HI (1)");
    CHECK(row.ranking_str(2) == "RU (5), JA (3)");
  }

  TEST_CASE("pattern shares sum to one") {
    std::vector<std::pair<std::string, FailurePattern>> rows;
    const FailurePattern all[] = {FailurePattern::Correct, FailurePattern::WrongFromStart,
                                  FailurePattern::WrongFromStart, FailurePattern::WrongFromMiddle,
                                  FailurePattern::CorrectWithDeviations, FailurePattern::WrongStartRecovered,
                                  FailurePattern::Correct};
    for (auto p : all) rows.push_back({"g", p});
    const auto d = pattern_distribution(rows).at("g");
    CHECK(d.n == 7);
    double sum = 0;
    for (std::size_t i = 0; i < kFailurePatternCount; ++i) sum += d.share(static_cast<FailurePattern>(i)).value();
    CHECK(sum == doctest::Approx(100.0));
    CHECK(d.share(FailurePattern::WrongFromStart).str() == "28.57");
  }
}
