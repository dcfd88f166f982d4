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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "doctest.h"
#include "ola/annotation_service.hpp"
#include "ola/errors.hpp"
#include "ola/jsonl.hpp"
#include "support.hpp"

using namespace ola;
using namespace ola::test;

namespace {

std::vector<PromptRecord> items() {
  return {simple_prompt("s1", "Tell me about the 도서관 hours.", kEnglish, kKorean),
          complex_prompt("c1", "Translate this.\n\n회의는 내일입니다.", kEnglish, kKorean,
                         Category::ContentLanguage),
          complex_prompt("c2", "회의는 내일입니다.\n\nTranslate this.", kEnglish, kKorean,
                         Category::ContentLanguage, Position::ContentFirst)};
}

std::string record(const std::string& item, const std::string& who, const std::string& expected,
                   const std::string& severity = "Trivial") {
  return Json{{"item", item}, {"annotator", who}, {"expected", expected}, {"severity", severity}}.dump();
}

}  // namespace

TEST_SUITE("annotation") {
  TEST_CASE("tasks come in dataset order with choices") {
    TempDir tmp;
    AnnotationService svc(items(), tmp.file("store.jsonl"));
    auto t = svc.next_task("ann");
    CHECK(t["item_id"] == "s1");
    const auto langs = t["options"]["expected_lang"];
    REQUIRE(langs.size() == 3);
    CHECK(langs[0]["value"] == "en");
    CHECK(langs[1]["value"] == "ko");
    CHECK(langs[2]["value"] == "Either");
    CHECK(t["options"]["severity"] == Json::array({"Trivial", "Uncomfortable", "Critical"}));
    CHECK_FALSE(t.contains("instruction"));

    svc.submit(record("s1", "ann", "en"));
    t = svc.next_task("ann");
    CHECK(t["item_id"] == "c1");
    CHECK(t["instruction"] == "Translate this.");
    CHECK(t.contains("guidance"));
    svc.submit(record("c1", "ann", "ko"));
    CHECK(svc.next_task("ann")["instruction"] == "Translate this.");
    CHECK(svc.next_task("other")["item_id"] == "s1");
    svc.submit(record("c2", "ann", "Either"));
    CHECK(svc.next_task("ann")["done"] == true);
  }

  TEST_CASE("invalid submissions store nothing") {
    TempDir tmp;
    const auto store = tmp.file("store.jsonl");
    AnnotationService svc(items(), store);
    CHECK_THROWS_AS(svc.submit(record("zz", "ann", "en")), ValidationError);
    CHECK_THROWS_AS(svc.submit(record("s1", "ann", "th")), ValidationError);
    CHECK_THROWS_AS(svc.submit(record("s1", "ann", "en", "severe")), ValidationError);
    CHECK_THROWS_AS(svc.submit("{not json"), ValidationError);
    CHECK_THROWS_AS(svc.submit("[1]"), ValidationError);
    CHECK_THROWS_AS(svc.submit("\n  \n"), ValidationError);
    CHECK_THROWS_AS(svc.submit(record("s1", "ann", "en") + "\n" + record("s1", "ann", "xx")), ValidationError);
    CHECK_THROWS_AS(svc.next_task(""), ValidationError);
    CHECK(svc.records().empty());
    CHECK_FALSE(std::filesystem::exists(store));
  }

  TEST_CASE("a batch body stores every line") {
    TempDir tmp;
    AnnotationService svc(items(), tmp.file("store.jsonl"));
    const auto r = svc.submit(record("s1", "a", "en") + "\r\n" + record("c1", "a", "Korean", "Critical") + "\n");
    CHECK(r["count"] == 2);
    const auto p = svc.progress("a");
    CHECK(p["done"] == 2);
    CHECK(p["remaining"] == 1);
    CHECK(p["total"] == 3);
    CHECK(svc.progress("")["records"] == 2);
  }

  TEST_CASE("resubmission replaces and the store resumes") {
    TempDir tmp;
    const auto store = tmp.file("store.jsonl");
    {
      AnnotationService svc(items(), store);
      svc.submit(R"({"item":"s1","annotator":"a","expected":"en","severity":"Trivial","submitted_at":"2026-01-01T00:00:00.000Z"})");
      svc.submit(R"({"item":"s1","annotator":"a","expected":"ko","severity":"Critical","submitted_at":"2026-01-01T00:00:01.000Z"})");
      svc.submit(record("c1", "b", "en"));
      CHECK(svc.records().size() == 2);
    }
    CHECK(read_annotation_store(store).size() == 3);
    AnnotationService again(items(), store);
    const auto recs = again.records();
    REQUIRE(recs.size() == 2);
    CHECK(recs[1].item_id == "s1");
    CHECK(recs[1].expected_lang == ExpectedLanguage(kKorean));
    CHECK(again.next_task("a")["item_id"] == "c1");
    CHECK(again.next_task("b")["item_id"] == "s1");
  }

  TEST_CASE("server stamps submission times") {
    TempDir tmp;
    AnnotationService svc(items(), tmp.file("store.jsonl"));
    svc.submit(record("s1", "a", "en"));
    const auto ts = svc.records().at(0).submitted_at;
    REQUIRE(ts.size() == 24);
    CHECK(ts[10] == 'T');
    CHECK(ts[19] == '.');
    CHECK(ts.back() == 'Z');
  }

  TEST_CASE("duplicate item ids are refused") {
    TempDir tmp;
    auto v = items();
    v.push_back(v.front());
    CHECK_THROWS_AS(AnnotationService(v, tmp.file("s.jsonl")), ValidationError);
  }

  TEST_CASE("HTTP API") {
    TempDir tmp;
    AnnotationService svc(items(), tmp.file("store.jsonl"));
    const int port = svc.start();
    CHECK_THROWS_AS(svc.start(), ConfigError);
    httplib::Client cli("127.0.0.1", port);

    auto res = cli.Get("/api/tasks/next?annotator=web");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    CHECK(Json::parse(res->body)["item_id"] == "s1");

    res = cli.Get("/api/tasks/next");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(Json::parse(res->body)["error"] == "ValidationError");

    res = cli.Post("/api/annotations", record("s1", "web", "ko", "Uncomfortable"), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(Json::parse(res->body)["count"] == 1);

    res = cli.Post("/api/annotations", record("s1", "web", "klingon"), "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);

    res = cli.Get("/api/progress?annotator=web");
    REQUIRE(res);
    CHECK(Json::parse(res->body)["done"] == 1);
    CHECK(cli.Get("/nope")->status == 404);
    svc.stop();
    svc.stop();
  }

  TEST_CASE("static directory is mounted") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path() / "www");
    write_file(tmp.file("www/index.html"), "<p>ok</p>");
    AnnotationService svc(items(), tmp.file("store.jsonl"));
    const int port = svc.start("127.0.0.1", 0, tmp.file("www"));
    httplib::Client cli("127.0.0.1", port);
    const auto res = cli.Get("/index.html");
    REQUIRE(res);
    CHECK(res->body == "<p>ok</p>");
    svc.stop();
    AnnotationService other(items(), tmp.file("store2.jsonl"));
    CHECK_THROWS_AS(other.start("127.0.0.1", 0, tmp.file("missing")), ConfigError);
  }
}
