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
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ola/errors.hpp"
#include "ola/jsonl.hpp"
#include "ola/lid.hpp"
#include "ola/ngram.hpp"
#include "support.hpp"

using namespace ola;
using namespace ola::test;

namespace {

Segment seg(std::string text) {
  auto s = segment_sentences(text);
  REQUIRE(s.size() == 1);
  return s.front();
}

// Lower-case ASCII n-gram log-likelihood computed from first principles:
// letter runs padded with ^ and $, orders 1..3, add-k smoothing over the
// union vocabulary.
std::map<std::string, double> ascii_oracle(const std::vector<std::pair<std::string, std::string>>& corpus,
                                           const std::string& text, double k) {
  auto grams = [](const std::string& s) {
    std::vector<std::string> out;
    std::string run;
    auto flush = [&] {
      if (run.empty()) return;
      const std::string p = "^" + run + "$";
      for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t i = 0; i + n <= p.size(); ++i)
          if (n > 1 || (p[i] != '^' && p[i] != '$')) out.push_back(p.substr(i, n));
      run.clear();
    };
    for (char c : s) {
      if (std::isalpha(static_cast<unsigned char>(c))) run += static_cast<char>(std::tolower(c));
      else flush();
    }
    flush();
    return out;
  };
  std::map<std::string, std::map<std::string, double>> counts;
  std::set<std::string> vocab;
  for (const auto& [s, lang] : corpus)
    for (const auto& g : grams(s)) {
      counts[lang][g] += 1;
      vocab.insert(g);
    }
  std::map<std::string, double> ll;
  for (const auto& [lang, table] : counts) {
    double total = 0;
    for (const auto& [g, c] : table) total += c;
    double sum = 0;
    for (const auto& g : grams(text)) {
      const double c = table.contains(g) ? table.at(g) : 0.0;
      sum += std::log((c + k) / (total + k * static_cast<double>(vocab.size())));
    }
    ll[lang] = sum;
  }
  return ll;
}

}  // namespace

TEST_SUITE("lid") {
  TEST_CASE("toy corpus scores match the n-gram oracle") {
    const std::vector<std::pair<std::string, std::string>> corpus{{"the cat sat", "en"}, {"kucing itu duduk", "id"}};
    std::vector<LabeledSentence> train;
    for (const auto& [s, l] : corpus) train.push_back({s, Language(l)});
    const auto model = NgramModel::train(train);
    for (const std::string probe : {"the dog", "itu kucing", "Sat Duduk", "xyz"}) {
      const auto oracle = ascii_oracle(corpus, probe, 0.5);
      const auto ll = model.log_likelihoods(probe);
      REQUIRE(model.languages().size() == 2);
      for (std::size_t i = 0; i < 2; ++i)
        CHECK(ll[i] == doctest::Approx(oracle.at(model.languages()[i].code())).epsilon(1e-12));
    }
    LidConfig cfg;
    cfg.supported = {kEnglish, kIndonesian};
    CHECK(identify_sentence(seg("the dog"), &model, cfg).label == kEnglish);
  }

  TEST_CASE("single-language model always answers that language") {
    const std::vector<LabeledSentence> train{{"kucing itu duduk di atas tikar", kIndonesian}};
    const auto model = NgramModel::train(train);
    LidConfig cfg;
    for (const std::string s : {"the cat sat", "bonjour tout le monde", "zzz qqq"}) {
      const auto p = identify_sentence(seg(s), &model, cfg);
      CHECK(p.label == kIndonesian);
      CHECK(p.confidence == doctest::Approx(1.0));
    }
  }

  TEST_CASE("training is order independent") {
    auto corpus = load_corpus_dir(source_path("resources/lid"));
    const auto a = NgramModel::train(corpus);
    std::mt19937 rng(4);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    const auto b = NgramModel::train(corpus);
    CHECK(a == b);
    std::ostringstream sa, sb;
    a.save(sa);
    b.save(sb);
    CHECK(sa.str() == sb.str());
  }

  TEST_CASE("model file round-trips") {
    const auto& m = *shipped_model();
    std::stringstream s;
    m.save(s);
    const auto back = NgramModel::load(s);
    CHECK(back == m);
    CHECK(back.log_likelihoods("the weather is nice") == m.log_likelihoods("the weather is nice"));
    std::istringstream bad("not a model\n");
    CHECK_THROWS_AS(NgramModel::load(bad), FormatError);
  }

  TEST_CASE("declared language without sentences") {
    const std::vector<LabeledSentence> train{{"the cat", kEnglish}};
    const std::vector<Language> declared{kEnglish, kKorean};
    CHECK_THROWS_AS(NgramModel::train(train, declared), MissingLanguage);
    CHECK_THROWS_AS(NgramModel::train(std::vector<LabeledSentence>{}), MissingLanguage);
  }

  TEST_CASE("script shortcuts") {
    LidConfig cfg;
    auto p = identify_sentence(seg("안녕하세요 여러분"), nullptr, cfg);
    CHECK(p.label == kKorean);
    CHECK(p.confidence == doctest::Approx(1.0));
    CHECK(p.source == LidSource::ScriptShortcut);
    p = identify_sentence(seg("워밍업"), nullptr, cfg);
    CHECK(p.label == kKorean);
    CHECK(p.source == LidSource::ScriptShortcut);
    CHECK(identify_sentence(seg("東京へ行きます"), nullptr, cfg).label == kJapanese);
    CHECK(identify_sentence(seg("我们今天去学校"), nullptr, cfg).label == kChinese);
    CHECK(identify_sentence(seg("Привет всем"), nullptr, cfg).label == kRussian);
    CHECK(identify_sentence(seg("สวัสดีครับ"), nullptr, cfg).label == kThai);
  }

  TEST_CASE("Cyrillic shortcut needs ru to be the only Cyrillic language") {
    LidConfig cfg;
    cfg.supported.push_back(Language("uk"));
    CHECK(identify_sentence(seg("Привет всем"), nullptr, cfg).source != LidSource::ScriptShortcut);
  }

  TEST_CASE("n-gram path on Latin text") {
    const auto p = shipped_backend().identify(seg("the cat sat on the mat"), {}, 0);
    CHECK(p.label == kEnglish);
    CHECK(p.confidence > 0.5);
    CHECK(p.confidence <= 1.0);
    CHECK(p.source == LidSource::NgramModel);
    CHECK(shipped_backend().identify(seg("saya tidak tahu di mana rumahnya"), {}, 0).label == kIndonesian);
  }

  TEST_CASE("letterless and short segments") {
    LidConfig cfg;
    CHECK_FALSE(identify_sentence(seg("12345."), shipped_model().get(), cfg).determined());
    cfg.min_letters = 10;
    CHECK_FALSE(identify_sentence(seg("the cat."), shipped_model().get(), cfg).determined());
  }

  TEST_CASE("Hangul segments are ko whatever the model says") {
    const std::vector<LabeledSentence> train{{"the cat", kEnglish}, {"kucing", kIndonesian}};
    const auto model = std::make_shared<const NgramModel>(NgramModel::train(train));
    const BuiltinLidBackend be(model);
    for (const std::string s : {"가", "오늘은 날씨가 좋습니다", "한국어 문장입니다!"}) CHECK(be.identify(seg(s), {}, 0).label == kKorean);
  }

  TEST_CASE("majority vote over labels") {
    const auto v = verdict_of({kKorean, kKorean, kKorean, kEnglish});
    CHECK(v.primary == kKorean);
    CHECK(v.voted_count.at(kKorean) == 3);
    CHECK(v.voted_count.at(kEnglish) == 1);
    CHECK_FALSE(v.tie_broken);
    CHECK(verdict_of({kEnglish}).primary == kEnglish);
  }

  TEST_CASE("ties go to letter mass") {
    const auto v = response_verdict("The weather today is lovely and warm. 좋아요 정말.", shipped_backend());
    CHECK(v.primary == kEnglish);
    CHECK(v.tie_broken);
  }

  TEST_CASE("short segments do not vote unless nothing else does") {
    auto v = response_verdict("Ok. The museum opens at nine every morning. 네.", shipped_backend());
    CHECK(v.primary == kEnglish);
    std::size_t voters = 0;
    for (const auto& l : v.sentence_labels) voters += l.votes;
    CHECK(voters == 1);
    v = response_verdict("네. 좋아요. Ok.", shipped_backend());
    CHECK(v.primary == kKorean);
  }

  TEST_CASE("empty response") {
    CHECK_THROWS_AS(response_verdict("", shipped_backend()), EmptyResponse);
    CHECK_THROWS_AS(response_verdict(" \n ", shipped_backend()), EmptyResponse);
  }

  TEST_CASE("verdict invariants") {
    const auto v = response_verdict("오늘은 날씨가 좋아요. The sun is out. 산책하러 갈까요?", shipped_backend());
    REQUIRE(v.determined());
    CHECK(v.voted_count.contains(*v.primary));
    std::size_t sum = 0, voters = 0;
    for (const auto& [l, c] : v.voted_count) sum += c;
    for (const auto& l : v.sentence_labels) voters += l.votes;
    CHECK(sum == voters);
    for (const auto& [l, c] : v.voted_count) CHECK(c <= v.voted_count.at(*v.primary));
  }

  TEST_CASE("vote is invariant under segment permutation") {
    std::vector<std::string> sents{"오늘은 날씨가 정말 좋습니다.", "The library closes at eight tonight.",
                                   "도서관은 여덟 시에 문을 닫습니다.", "Please bring your student card.",
                                   "학생증을 꼭 챙겨 오세요."};
    std::sort(sents.begin(), sents.end());
    std::optional<Language> first;
    do {
      std::string text;
      for (const auto& s : sents) text += s + " ";
      const auto v = response_verdict(text, shipped_backend());
      if (!first) first = v.primary;
      CHECK(v.primary == first);
    } while (std::next_permutation(sents.begin(), sents.end()));
  }

  TEST_CASE("a short foreign token never flips a passing response") {
    const std::vector<std::string> sents{"The museum reopened last spring.", "Its east wing was rebuilt.",
                                         "Tickets are cheaper on weekdays.", "Guided tours start at ten."};
    for (std::size_t i = 0; i < sents.size(); ++i) {
      for (const std::string token : {"네", "집", "사랑", "колон", "さくら"}) {
        std::string text;
        for (std::size_t j = 0; j < sents.size(); ++j) {
          auto s = sents[j];
          if (j == i) s.insert(s.find(' '), " " + token);
          text += s + " ";
        }
        CHECK(response_verdict(text, shipped_backend()).primary == kEnglish);
      }
    }
  }

  TEST_CASE("external labels with fallback") {
    TempDir tmp;
    ExternalLidBackend ext;
    ext.add("r1", 0, kIndonesian, 0.9);
    ext.add("r1", 1, kKorean, 0.8);
    ext.save_file(tmp.file("labels.jsonl"));
    auto fallback = std::make_shared<BuiltinLidBackend>(shipped_model());
    const auto loaded = ExternalLidBackend::load_file(tmp.file("labels.jsonl"), {}, fallback);
    CHECK(loaded.size() == 2);
    const auto s = seg("The cat sat on the mat.");
    const auto p = loaded.identify(s, "r1", 0);
    CHECK(p.label == kIndonesian);
    CHECK(p.source == LidSource::External);
    CHECK(p.confidence == doctest::Approx(0.9));
    CHECK(loaded.identify(s, "r2", 0).label == kEnglish);
    CHECK_FALSE(ExternalLidBackend().identify(s, "r2", 0).determined());
    write_file(tmp.file("bad.jsonl"), "{\"response_id\": 3}\n");
    CHECK_THROWS_AS(ExternalLidBackend::load_file(tmp.file("bad.jsonl")), FormatError);
  }
}
