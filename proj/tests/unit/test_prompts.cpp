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
#include "ola/jsonl.hpp"
#include "ola/mock.hpp"
#include "ola/prompts.hpp"
#include "support.hpp"

using namespace ola;
using namespace ola::test;

namespace {

LlmClient judge_replying(std::string reply) {
  EndpointConfig ep;
  ep.base_url = "mock://judge";
  ep.model_id = "judge";
  return LlmClient(ep, std::make_shared<ScriptedProvider>([reply](const ChatRequest&) {
    return ProviderReply{200, reply, "stop", ""};
  }));
}

}  // namespace

TEST_SUITE("prompts") {
  TEST_CASE("Baseline is the bare prompt") {
    const auto catalog = PromptCatalog::builtin();
    for (const auto& p : {simple_prompt("s", "Tell me about 도서관 hours.  ", kEnglish, kKorean),
                          complex_prompt("c", "Fix this.\n\n회의는 내일입니다.", kEnglish, kKorean,
                                         Category::ContentLanguage)}) {
      const auto m = assemble_prompt(p, Condition::Baseline, catalog);
      REQUIRE(m.size() == 1);
      CHECK(m[0].role == "user");
      CHECK(m[0].content == p.text);
    }
  }

  TEST_CASE("Oracle appends the catalog directive") {
    const auto catalog = PromptCatalog::builtin();
    auto p = simple_prompt("s", "도서관은 몇 시에 open 하나요?", kKorean, kEnglish);
    p.expected_lang = kEnglish;
    const auto m = assemble_prompt(p, Condition::Oracle, catalog);
    REQUIRE(m.size() == 1);
    CHECK(m[0].content == "도서관은 몇 시에 open 하나요? Respond in 영어.");
    CHECK(catalog.directive_language("Respond in 영어.") == kEnglish);
    CHECK(catalog.directive_language("Respond in 한국어.") == kKorean);
    CHECK_FALSE(catalog.directive_language("Please be brief.").has_value());

    const auto c = complex_prompt("c", "Fix this.\n\n회의는 내일입니다.\n", kEnglish, kKorean,
                                  Category::ContentLanguage);
    CHECK(assemble_prompt(c, Condition::Oracle, catalog)[0].content ==
          "Fix this.\n\n회의는 내일입니다.\n\nRespond in Korean.");
  }

  TEST_CASE("CoT wraps the prompt with the frame-language instruction") {
    const auto catalog = PromptCatalog::builtin();
    const auto en = simple_prompt("s", "Tell me about 도서관 hours.", kEnglish, kKorean);
    const auto ko = simple_prompt("k", "도서관 hours 알려줘.", kKorean, kEnglish);
    const auto m = assemble_prompt(en, Condition::CoT, catalog);
    REQUIRE(m.size() == 1);
    CHECK(m[0].content.starts_with(en.text));
    CHECK(m[0].content.find(catalog.cot_instruction(kEnglish)) != std::string::npos);
    CHECK(assemble_prompt(ko, Condition::CoT, catalog)[0].content.find(catalog.cot_instruction(kKorean)) !=
          std::string::npos);
    CHECK(catalog.cot_instruction(kChinese) == catalog.cot_instruction(kEnglish));
  }

  TEST_CASE("system-prompt conditions") {
    const auto catalog = PromptCatalog::builtin();
    const auto p = simple_prompt("s", "Tell me about 도서관 hours.", kEnglish, kKorean);
    auto m = assemble_prompt(p, Condition::ZeroShotSys, catalog);
    REQUIRE(m.size() == 2);
    CHECK(m[0].role == "system");
    CHECK(m[0].content == catalog.text("zero_shot_system.txt"));
    CHECK(m[1].content == p.text);
    m = assemble_prompt(p, Condition::FewShotSys, catalog);
    REQUIRE(m.size() == 10);
    CHECK(m[0].role == "system");
    for (std::size_t i = 1; i < 9; ++i) CHECK(m[i].role == (i % 2 ? "user" : "assistant"));
    CHECK(m[9].content == p.text);
    const auto c = complex_prompt("c", "Fix this.\n\n회의.", kEnglish, kKorean, Category::ContentLanguage);
    const auto mc = assemble_prompt(c, Condition::FewShotSys, catalog);
    CHECK(mc.size() == 10);
    CHECK(mc[1].content != m[1].content);
  }

  TEST_CASE("missing templates") {
    auto catalog = PromptCatalog::builtin();
    CHECK_THROWS_AS(catalog.text("nope.txt"), MissingTemplate);
    CHECK_THROWS_AS(catalog.oracle_directive(kThai, kEnglish), MissingTemplate);
    catalog.set("few_shot.json", "{}");
    const auto p = simple_prompt("s", "Tell me about 도서관 hours.", kEnglish, kKorean);
    CHECK_THROWS_AS(assemble_prompt(p, Condition::FewShotSys, catalog), MissingTemplate);
  }

  TEST_CASE("catalog overrides from a directory") {
    TempDir tmp;
    write_file(tmp.file("zero_shot_system.txt"), "Answer carefully.");
    const auto c = PromptCatalog::with_overrides(tmp.path().string());
    CHECK(c.text("zero_shot_system.txt") == "Answer carefully.");
    CHECK(c.has("cot.en.txt"));
    CHECK_THROWS_AS(PromptCatalog::with_overrides(tmp.file("missing")), ConfigError);
  }

  TEST_CASE("template rendering") {
    CHECK(render_template("a {x} b {y} {x}", {{"x", "1"}, {"y", "2"}}) == "a 1 b 2 1");
    CHECK(render_template("{unknown} stays", {}) == "{unknown} stays");
  }

  TEST_CASE("parse CoT replies") {
    auto f = parse_cot(R"({"thought":"Korean, matrix language","answer":"안녕하세요"})");
    CHECK(f.thought == "Korean, matrix language");
    CHECK(f.answer == "안녕하세요");
    f = parse_cot("Sure!\n```json\n{\"thought\": \"t\", \"answer\": \"a {b}\"}\n```\nDone.");
    CHECK(f.answer == "a {b}");
    f = parse_cot(R"(first {"x": 1} then {"thought": "t", "answer": "a"})");
    CHECK(f.thought == "t");
    CHECK_THROWS_AS(parse_cot("I think the answer is 42."), CotParseError);
    CHECK_THROWS_AS(parse_cot(R"({"thought": "only"})"), CotParseError);
  }

  TEST_CASE("CoT serialization round-trips") {
    for (const CotFields& f : {CotFields{"t", "a"}, CotFields{"영어로 답하자", "Hello \"there\"\n{}"}, CotFields{"", ""}})
      CHECK(parse_cot(serialize_cot(f)) == f);
  }

  TEST_CASE("decision heuristic") {
    CHECK(classify_decision("I will answer in Korean because the matrix is Korean").language == kKorean);
    CHECK(classify_decision("영어로 답하겠습니다").language == kEnglish);
    CHECK(classify_decision("The user wrote in english.").language == kEnglish);
    CHECK(classify_decision("中文回答").language == kChinese);
    CHECK_FALSE(classify_decision("").language.has_value());
    CHECK_FALSE(classify_decision("Mixed English and Korean words").language.has_value());
  }

  TEST_CASE("decision judge wins when it parses") {
    auto judge = judge_replying(R"({"language": "Korean"})");
    auto d = classify_decision("I will answer in English.", &judge);
    CHECK(d.language == kKorean);
    CHECK(d.from_judge);
    auto others = judge_replying(R"({"language": "Others"})");
    CHECK_FALSE(classify_decision("English", &others).language.has_value());
    auto bad = judge_replying("Klingon");
    d = classify_decision("I will answer in English.", &bad);
    CHECK(d.language == kEnglish);
    CHECK_FALSE(d.from_judge);
  }

  TEST_CASE("find_json") {
    CHECK(find_json("text [1, 2] more", false)->is_array());
    CHECK(find_json("x {\"a\": \"}\"} y")->at("a") == "}");
    CHECK_FALSE(find_json("no json here").has_value());
  }
}
