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

#include <random>

#include "doctest.h"
#include "ola/script.hpp"
#include "ola/utf8.hpp"

using namespace ola;

namespace {

// Per-character tally used as the oracle for profiles.
std::map<ScriptClass, std::size_t> tally(std::string_view text) {
  std::map<ScriptClass, std::size_t> out;
  for (char32_t c : utf8::decode(text)) ++out[classify_char(c)];
  return out;
}

}  // namespace

TEST_SUITE("script") {
  TEST_CASE("classify_char on representative letters") {
    CHECK(classify_char(U'가') == ScriptClass::Hangul);
    CHECK(classify_char(U'ᄀ') == ScriptClass::Hangul);
    CHECK(classify_char(U'a') == ScriptClass::Latin);
    CHECK(classify_char(U'é') == ScriptClass::Latin);
    CHECK(classify_char(U'ц') == ScriptClass::Cyrillic);
    CHECK(classify_char(U'の') == ScriptClass::Kana);
    CHECK(classify_char(U'カ') == ScriptClass::Kana);
    CHECK(classify_char(U'學') == ScriptClass::Han);
    CHECK(classify_char(U'न') == ScriptClass::Devanagari);
    CHECK(classify_char(U'م') == ScriptClass::Arabic);
    CHECK(classify_char(U'ก') == ScriptClass::Thai);
    CHECK(classify_char(U'ש') == ScriptClass::Hebrew);
    CHECK(classify_char(U'α') == ScriptClass::OtherLetter);
  }

  TEST_CASE("classify_char on non-letters") {
    CHECK(classify_char(U'7') == ScriptClass::Digit);
    CHECK(classify_char(U'٣') == ScriptClass::Digit);
    CHECK(classify_char(U' ') == ScriptClass::Whitespace);
    CHECK(classify_char(U'\n') == ScriptClass::Whitespace);
    CHECK(classify_char(U'　') == ScriptClass::Whitespace);
    CHECK(classify_char(U'.') == ScriptClass::Punctuation);
    CHECK(classify_char(U'。') == ScriptClass::Punctuation);
    CHECK(classify_char(U'+') == ScriptClass::OtherSymbol);
    CHECK(classify_char(U'😀') == ScriptClass::OtherSymbol);
    CHECK(classify_char(0x10FFFF) == ScriptClass::OtherSymbol);
  }

  TEST_CASE("is_letter partitions the classes") {
    int letters = 0;
    for (std::size_t i = 0; i < kScriptClassCount; ++i) letters += is_letter(static_cast<ScriptClass>(i));
    CHECK(letters == 10);
    CHECK_FALSE(is_letter(ScriptClass::Digit));
    CHECK(is_letter(ScriptClass::OtherLetter));
  }

  TEST_CASE("script names round-trip") {
    for (std::size_t i = 0; i < kScriptClassCount; ++i) {
      const auto c = static_cast<ScriptClass>(i);
      CHECK(parse_script_class(script_name(c)) == c);
    }
    CHECK_FALSE(parse_script_class("Klingon").has_value());
  }

  TEST_CASE("classification is total and stable over random scalars") {
    std::mt19937 rng(11);
    for (int i = 0; i < 10000; ++i) {
      char32_t c = rng() % 0x110000;
      if (c >= 0xD800 && c <= 0xDFFF) continue;
      const auto a = classify_char(c);
      CHECK(static_cast<std::size_t>(a) < kScriptClassCount);
      CHECK(classify_char(c) == a);
    }
  }

  TEST_CASE("profile of mixed Latin and Hangul") {
    const auto p = script_profile("abc가나");
    CHECK(p.letter_total == 5);
    CHECK(p.ratio(ScriptClass::Latin) == doctest::Approx(0.6));
    CHECK(p.ratio(ScriptClass::Hangul) == doctest::Approx(0.4));
    CHECK(p.ratios.size() == 2);
  }

  TEST_CASE("profile of empty and letterless text") {
    const auto e = script_profile("");
    CHECK(e.letter_total == 0);
    CHECK(e.ratios.empty());
    const auto p = script_profile("1234 !!");
    CHECK(p.letter_total == 0);
    CHECK(p.ratios.empty());
    CHECK(p.count(ScriptClass::Digit) == 4);
    CHECK(p.count(ScriptClass::Punctuation) == 2);
    CHECK(p.count(ScriptClass::Whitespace) == 1);
  }

  TEST_CASE("profile counts match a per-character tally") {
    const std::string text = "Hello 세계! 東京 та 123 ไทย";
    const auto p = script_profile(text);
    const auto t = tally(text);
    for (std::size_t i = 0; i < kScriptClassCount; ++i) {
      const auto c = static_cast<ScriptClass>(i);
      CHECK(p.count(c) == (t.contains(c) ? t.at(c) : 0));
    }
  }

  TEST_CASE("profiles are additive and ratios normalized") {
    const std::vector<std::string> parts{"abc", "가나다 라", "мир", "12.", "", "ก ข", "漢字かな"};
    for (const auto& a : parts) {
      for (const auto& b : parts) {
        const auto pa = script_profile(a), pb = script_profile(b), pab = script_profile(a + b);
        for (std::size_t i = 0; i < kScriptClassCount; ++i) CHECK(pab.counts[i] == pa.counts[i] + pb.counts[i]);
        if (pab.letter_total > 0) {
          double sum = 0;
          for (const auto& [c, r] : pab.ratios) sum += r;
          CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
      }
    }
  }

  TEST_CASE("dominant letter class") {
    CHECK(script_profile("ab가나다").dominant_letter_class() == ScriptClass::Hangul);
    CHECK_FALSE(script_profile("123").dominant_letter_class().has_value());
  }

  TEST_CASE("script and language mapping") {
    CHECK(script_language(ScriptClass::Hangul) == kKorean);
    CHECK(script_language(ScriptClass::Cyrillic) == kRussian);
    CHECK(script_language(ScriptClass::Kana) == kJapanese);
    CHECK(language_script(kKorean) == ScriptClass::Hangul);
    CHECK(language_script(kEnglish) == ScriptClass::Latin);
  }

  TEST_CASE("boundary token language") {
    CHECK(boundary_token_language("What is the reason for doing a 워밍업 세트?", BoundaryPosition::Last) == kKorean);
    CHECK_FALSE(boundary_token_language("   ", BoundaryPosition::Last).has_value());
    CHECK_FALSE(boundary_token_language("?!...", BoundaryPosition::First).has_value());
    CHECK(boundary_token_language("안녕 hello", BoundaryPosition::First) == kKorean);
    CHECK(boundary_token_language("안녕 hello", BoundaryPosition::Last) == kEnglish);
  }

  TEST_CASE("Latin boundary tokens go through the resolver") {
    const LatinResolver to_id = [](std::string_view) { return std::optional<Language>(kIndonesian); };
    CHECK(boundary_token_language("apa kabar", BoundaryPosition::Last, to_id) == kIndonesian);
    const auto tok = boundary_token("\"(hello)\"", BoundaryPosition::First);
    REQUIRE(tok.has_value());
    CHECK(tok->text == "hello");
    CHECK(tok->script == ScriptClass::Latin);
  }

  TEST_CASE("boundary language ignores trailing whitespace and punctuation") {
    const std::vector<std::string> texts{"Tell me about 도서관", "도서관 hours please", "why 왜"};
    for (const auto& t : texts) {
      const auto base = boundary_token_language(t, BoundaryPosition::Last);
      for (const std::string suffix : {" ", "  \n", "?", "!!", ".\t", "?! "})
        CHECK(boundary_token_language(t + suffix, BoundaryPosition::Last) == base);
    }
  }
}
