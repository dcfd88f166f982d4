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

#include "ola/evaluation.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>

#include "ola/errors.hpp"
#include "ola/segment.hpp"
#include "ola/utf8.hpp"

namespace ola {
namespace {

bool ends_with_colon(const Segment& s) {
  return s.text.ends_with(":") || s.text.ends_with("\xEF\xBC\x9A");  // U+FF1A
}

bool starts_markdown(const Segment& s) {
  if (s.code_block) return true;
  const std::string_view t = s.text;
  for (std::string_view m : {"#", "- ", "* ", "+ ", "> ", "|", "```", "---"})
    if (t.starts_with(m)) return true;
  std::size_t i = 0;
  while (i < t.size() && t[i] >= '0' && t[i] <= '9') ++i;
  return i > 0 && i + 1 < t.size() && (t[i] == '.' || t[i] == ')') && t[i + 1] == ' ';
}

// Whether segment i is followed by a blank line or a markdown block.
bool break_after(const std::u32string& text, const std::vector<SentenceLabel>& labels,
                 std::size_t i) {
  if (i + 1 >= labels.size()) return false;
  const auto& cur = labels[i].segment;
  const auto& next = labels[i + 1].segment;
  if (cur.code_block || starts_markdown(next)) return true;
  std::size_t newlines = 0;
  for (std::size_t p = cur.end_offset; p < next.start_offset && p < text.size(); ++p)
    if (text[p] == U'\n') ++newlines;
  return newlines >= 2;
}

Decomposition build(std::string_view response_text, const std::vector<SentenceLabel>& labels,
                    const std::vector<bool>& meta) {
  const std::u32string text = utf8::decode(response_text);
  std::vector<Segment> segs;
  segs.reserve(labels.size());
  for (const auto& l : labels) segs.push_back(l.segment);
  const auto spans = tile_spans(segs, text.size());
  Decomposition d;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [b, e] = spans[i];
    d.parts.push_back({labels[i], b, e, utf8::encode(std::u32string_view(text).substr(b, e - b)),
                       static_cast<bool>(meta[i])});
  }
  return d;
}

std::vector<bool> heuristic_meta(std::string_view response_text,
                                 const std::vector<SentenceLabel>& labels,
                                 const Language& instr) {
  const std::u32string text = utf8::decode(response_text);
  const std::size_t n = labels.size();
  std::vector<bool> meta(n, false);
  auto instr_like = [&](std::size_t i) {
    const auto& p = labels[i].prediction;
    return !p.determined() || *p.label == instr;
  };
  auto is_instr = [&](std::size_t i) {
    const auto& p = labels[i].prediction;
    return p.determined() && *p.label == instr;
  };

  std::size_t k = 0;
  bool any_instr = false;
  while (k < n && instr_like(k)) any_instr |= is_instr(k++);
  std::size_t meta_end = 0;
  if (k < n && any_instr) {
    for (std::size_t j = k; j-- > 0;) {
      if (is_instr(j) && (ends_with_colon(labels[j].segment) || break_after(text, labels, j))) {
        meta_end = j + 1;
        break;
      }
    }
  }
  if (k >= 1 && k + 1 < n && any_instr && ends_with_colon(labels[k].segment)) meta_end = k + 1;
  for (std::size_t i = 0; i < meta_end; ++i) meta[i] = true;

  std::size_t m = n;
  bool suffix_instr = false;
  while (m > meta_end + 1 && instr_like(m - 1)) suffix_instr |= is_instr(--m);
  if (suffix_instr && m < n && break_after(text, labels, m - 1))
    for (std::size_t i = m; i < n; ++i) meta[i] = true;
  return meta;
}

bool abstains(const std::vector<SentenceLabel>& labels, const std::vector<bool>& meta) {
  bool any_meta = false;
  bool task_determined = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (meta[i]) any_meta = true;
    else if (labels[i].prediction.determined()) task_determined = true;
  }
  return any_meta && !task_determined;
}

std::optional<std::vector<bool>> judge_meta(const std::vector<SentenceLabel>& labels,
                                            const JudgeContext& ctx) {
  const PromptCatalog fallback = ctx.catalog ? PromptCatalog{} : PromptCatalog::builtin();
  const PromptCatalog& cat = ctx.catalog ? *ctx.catalog : fallback;
  std::string listing;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    listing += std::to_string(i + 1) + ". " + labels[i].segment.text + "\n";
  }
  const std::string prompt =
      render_template(cat.text("segmentation_judge.txt"), {{"segments", listing}});
  const std::string reply = ctx.judge->complete({{"user", prompt}});
  try {
    const auto j = find_json(reply);
    if (!j || !j->contains("meta") || !j->contains("task") || !(*j)["meta"].is_array() ||
        !(*j)["task"].is_array())
      throw JudgeParseError("reply lacks \"meta\"/\"task\" arrays");
    std::vector<int> seen(labels.size(), 0);
    std::vector<bool> meta(labels.size(), false);
    for (const char* key : {"meta", "task"}) {
      for (const auto& v : (*j)[key]) {
        if (!v.is_number_integer()) throw JudgeParseError("non-integer segment number");
        const auto idx = v.get<long long>();
        if (idx < 1 || idx > static_cast<long long>(labels.size()))
          throw JudgeParseError("segment number out of range: " + std::to_string(idx));
        ++seen[idx - 1];
        meta[idx - 1] = std::string_view(key) == "meta";
      }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
      throw JudgeParseError("segments not assigned exactly once");
    return meta;
  } catch (const JudgeParseError& e) {
    spdlog::warn("{}; using heuristic segmentation", e.what());
    return std::nullopt;
  }
}

Decomposition decompose_labeled(std::string_view response_text,
                                const std::vector<SentenceLabel>& labels, const Language& instr,
                                const JudgeContext& ctx) {
  const auto heuristic = heuristic_meta(response_text, labels, instr);
  if (ctx.judge != nullptr) {
    if (auto judged = judge_meta(labels, ctx)) {
      if (*judged != heuristic) spdlog::info("segmentation judge disagrees with heuristic");
      auto d = build(response_text, labels, *judged);
      d.from_judge = true;
      return d;
    }
  }
  auto d = build(response_text, labels, heuristic);
  d.abstained = abstains(labels, heuristic);
  return d;
}

}  // namespace

std::int64_t Rate::hundredths() const noexcept {
  if (n == 0) return 0;
  return static_cast<std::int64_t>((passes * 20000 + n) / (2 * n));
}

std::string Rate::str() const { return format_hundredths(hundredths()); }

std::string format_hundredths(std::int64_t h) {
  std::string sign = h < 0 ? "-" : "";
  const std::uint64_t a = h < 0 ? static_cast<std::uint64_t>(-h) : static_cast<std::uint64_t>(h);
  const auto frac = a % 100;
  return sign + std::to_string(a / 100) + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
}

std::string_view to_string(ScoredSpan s) noexcept {
  return s == ScoredSpan::Whole ? "Whole" : "TaskContentOnly";
}

std::vector<Segment> Decomposition::meta_segments() const {
  std::vector<Segment> out;
  for (const auto& p : parts)
    if (p.meta) out.push_back(p.label.segment);
  return out;
}

std::vector<Segment> Decomposition::task_segments() const {
  std::vector<Segment> out;
  for (const auto& p : parts)
    if (!p.meta) out.push_back(p.label.segment);
  return out;
}

std::vector<SentenceLabel> Decomposition::task_labels() const {
  std::vector<SentenceLabel> out;
  for (const auto& p : parts)
    if (!p.meta) out.push_back(p.label);
  return out;
}

std::string Decomposition::reconstruct() const {
  std::string out;
  for (const auto& p : parts) out += p.span_text;
  return out;
}

Decomposition decompose_heuristic(std::string_view response_text,
                                  const std::vector<SentenceLabel>& labels,
                                  const Language& instruction_lang) {
  auto meta = heuristic_meta(response_text, labels, instruction_lang);
  auto d = build(response_text, labels, meta);
  d.abstained = abstains(labels, meta);
  return d;
}

Decomposition decompose_and_verify(std::string_view response_text, const Language& instruction_lang,
                                   const Language& content_lang, const LidBackend& backend,
                                   const JudgeContext& judge_ctx, std::string_view response_id) {
  if (instruction_lang == content_lang)
    throw ValidationError("instruction and content language are both " + content_lang.code());
  const auto labels = label_segments(segment_sentences(response_text), backend, response_id);
  return decompose_labeled(response_text, labels, instruction_lang, judge_ctx);
}

std::string EvalResult::response_id() const {
  return prompt_id + "|" + model_id + "|" + std::string(to_string(condition)) + "|" +
         std::to_string(sample_index);
}

EvalResult judge(const PromptRecord& prompt, const ResponseRecord& response,
                 const LidBackend& backend, const JudgeContext& judge_ctx) {
  EvalResult r;
  r.prompt_id = prompt.id;
  r.model_id = response.model_id;
  r.condition = response.condition;
  r.sample_index = response.sample_index;
  r.setting = prompt.setting;
  r.config_label = prompt.config_label();
  r.expected = prompt.expected_lang;
  r.cot_unparsed = response.condition == Condition::CoT && !response.thought.has_value();

  const std::string rid = response.response_id();
  const auto segments = segment_sentences(response.text);
  if (segments.empty()) throw EmptyResponse("response " + rid + " has no text");
  auto labels = label_segments(segments, backend, rid);

  const bool task_only = prompt.setting == Setting::Complex && prompt.content_lang &&
                         prompt.expected_lang.language() == prompt.content_lang;
  if (task_only) {
    if (!prompt.instruction_lang) throw ValidationError("prompt " + prompt.id + " lacks instruction_lang");
    auto d = decompose_labeled(response.text, labels, *prompt.instruction_lang, judge_ctx);
    if (d.abstained)
      throw JudgeUnavailable("segmentation of " + rid + " needs a judge and none is configured");
    r.scored_text_span = ScoredSpan::TaskContentOnly;
    r.meta_segment_count = d.meta_segments().size();
    r.verdict = vote(d.task_labels(), backend.config());
  } else {
    r.verdict = vote(std::move(labels), backend.config());
  }
  r.pass = prompt.expected_lang.accepts(r.verdict.primary);
  return r;
}

RateTable pass_rate(const std::vector<EvalResult>& results, const GroupKeyFn& group_by) {
  if (results.empty()) throw EmptyGroupSet("no results to aggregate");
  RateTable t;
  for (const auto& r : results) {
    const auto key = group_by(r);
    auto& cell = t.cells[key];
    ++cell.n;
    if (r.pass) ++cell.passes;
    t.members[key].push_back(r.response_id());
  }
  for (auto& [k, ids] : t.members) std::sort(ids.begin(), ids.end());
  return t;
}

Rate cot_consistency(const std::vector<CotItem>& items) {
  if (items.empty()) throw EmptyGroupSet("no CoT items");
  Rate r;
  for (const auto& it : items) {
    ++r.n;
    if (it.decided && it.answer.primary == it.decided) ++r.passes;
  }
  return r;
}

}  // namespace ola
