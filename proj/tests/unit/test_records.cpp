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
#include "ola/records.hpp"
#include "support.hpp"

using namespace ola;
using namespace ola::test;

TEST_SUITE("records") {
  TEST_CASE("enum names round-trip") {
    for (auto c : {Condition::Baseline, Condition::Oracle, Condition::CoT, Condition::ZeroShotSys,
                   Condition::FewShotSys})
      CHECK(parse_condition(to_string(c)) == c);
    for (auto s : {Setting::Simple, Setting::Complex}) CHECK(parse_setting(to_string(s)) == s);
    for (auto c : {Category::InstructionLanguage, Category::ContentLanguage})
      CHECK(parse_category(to_string(c)) == c);
    for (auto p : {Position::InstrFirst, Position::ContentFirst}) CHECK(parse_position(to_string(p)) == p);
    CHECK_THROWS_AS(parse_condition("Shouting"), ValidationError);
  }

  TEST_CASE("expected language") {
    const auto either = ExpectedLanguage::either();
    CHECK(either.accepts(kKorean));
    CHECK_FALSE(either.accepts(std::nullopt));
    CHECK(ExpectedLanguage::parse("Either") == either);
    CHECK(ExpectedLanguage::parse("ko") == ExpectedLanguage(kKorean));
    CHECK_FALSE(ExpectedLanguage(kEnglish).accepts(kKorean));
    CHECK_FALSE(ExpectedLanguage(kEnglish).accepts(std::nullopt));
  }

  TEST_CASE("prompt records survive a JSONL round trip") {
    TempDir tmp;
    auto s = simple_prompt("s1", "What is the reason for a 워밍업 세트?", kEnglish, kKorean);
    s.cs_level = 30;
    s.source = "src-7";
    const auto c = complex_prompt("c1", "번역해 주세요.\n\nGood morning, team.", kKorean, kEnglish,
                                  Category::ContentLanguage, Position::InstrFirst, "tpl-3", 2);
    auto either = simple_prompt("e1", "Hi 친구", kEnglish, kKorean);
    either.expected_lang = ExpectedLanguage::either();
    const std::vector<PromptRecord> rows{s, c, either};
    const auto path = write_prompts(tmp, rows);
    const auto back = jsonl::read(path);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(prompt_from_json(back[i]) == rows[i]);
    CHECK(read_file(path).find("워밍업") != std::string::npos);
  }

  TEST_CASE("response records survive a JSONL round trip") {
    TempDir tmp;
    auto a = response("p", "안녕하세요.", Condition::CoT, 2, "model-x");
    a.thought = "Korean";
    a.params = {{"temperature", 0.7}};
    const auto b = response("p", "Hello.");
    jsonl::write(tmp.file("r.jsonl"), {to_json(a), to_json(b)});
    const auto rows = jsonl::read(tmp.file("r.jsonl"));
    CHECK(response_from_json(rows[0]) == a);
    CHECK(response_from_json(rows[1]) == b);
    CHECK(a.response_id() == "p|model-x|CoT|2");
  }

  TEST_CASE("malformed rows") {
    CHECK_THROWS_AS(prompt_from_json(Json{{"id", "x"}}), FormatError);
    CHECK_THROWS_AS(response_from_json(Json{{"prompt_id", 3}}), FormatError);
    TempDir tmp;
    write_file(tmp.file("bad.jsonl"), "{\"a\":1}\n\n{oops\n");
    try {
      jsonl::read(tmp.file("bad.jsonl"));
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
  }

  TEST_CASE("append keeps earlier rows") {
    TempDir tmp;
    const auto path = tmp.file("a.jsonl");
    jsonl::append(path, Json{{"n", 1}});
    jsonl::append(path, Json{{"n", 2}});
    const auto rows = jsonl::read(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1]["n"] == 2);
  }

  TEST_CASE("prompt invariants") {
    CHECK_NOTHROW(simple_prompt("s", "x", kEnglish, kKorean).validate());
    CHECK_THROWS_AS(simple_prompt("s", "x", kEnglish, kEnglish).validate(), ValidationError);
    auto s = simple_prompt("", "x", kEnglish, kKorean);
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = simple_prompt("s", "x", kEnglish, kKorean);
    s.embedded_lang.reset();
    CHECK_THROWS_AS(s.validate(), ValidationError);

    auto c = complex_prompt("c", "x", kKorean, kEnglish, Category::InstructionLanguage);
    CHECK_NOTHROW(c.validate());
    CHECK(c.expected_lang == ExpectedLanguage(kKorean));
    c.expected_lang = kEnglish;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = complex_prompt("c", "x", kKorean, kEnglish, Category::ContentLanguage);
    CHECK(c.expected_lang == ExpectedLanguage(kEnglish));
    c.category.reset();
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }

  TEST_CASE("labels and frame language") {
    const auto s = simple_prompt("s", "x", kKorean, kEnglish);
    CHECK(s.config_label() == "KO Matrix--EN Embed");
    CHECK(s.frame_language() == kKorean);
    const auto c = complex_prompt("c", "x", kEnglish, kKorean, Category::ContentLanguage);
    CHECK(c.config_label() == "EN Inst--KO Content");
    CHECK(c.frame_language() == kEnglish);
  }

  TEST_CASE("thought only under CoT") {
    auto r = response("p", "Hello.", Condition::Baseline);
    r.thought = "English";
    CHECK_THROWS_AS(r.validate(), ValidationError);
    r.condition = Condition::CoT;
    CHECK_NOTHROW(r.validate());
  }

  TEST_CASE("digests") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    TempDir tmp;
    write_file(tmp.file("f"), "abc");
    CHECK(file_digest(tmp.file("f")) == sha256_hex("abc"));
  }
}
