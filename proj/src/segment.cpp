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

#include "ola/segment.hpp"

#include "ola/script.hpp"
#include "ola/utf8.hpp"

namespace ola {

namespace {

bool is_ascii_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_strong_terminator(char32_t c) {
  return c == U'。' || c == U'！' || c == U'？' || c == U'…';
}

bool is_closer(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case U'”': case U'’': case U'」': case U'』':
    case U'》': case U'〉': case U'）':
      return true;
    default:
      return false;
  }
}

bool is_space(char32_t c) { return classify_char(c) == ScriptClass::Whitespace; }

// Index just past the line containing `i` (past its '\n'), or n.
std::size_t line_end(const std::u32string& s, std::size_t i) {
  while (i < s.size() && s[i] != U'\n') ++i;
  return i < s.size() ? i + 1 : i;
}

// True when s[i..] starts a fence line: optional blanks then ```.
bool fence_at(const std::u32string& s, std::size_t i) {
  while (i < s.size() && (s[i] == U' ' || s[i] == U'\t')) ++i;
  return i + 3 <= s.size() && s[i] == U'`' && s[i + 1] == U'`' && s[i + 2] == U'`';
}

}  // namespace

std::vector<Segment> segment_sentences(std::string_view text) {
  const std::u32string s = utf8::decode(text);
  const std::size_t n = s.size();
  std::vector<Segment> out;

  auto emit = [&](std::size_t b, std::size_t e, bool code) {
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    if (b == e) return;
    Segment seg;
    seg.start_offset = b;
    seg.end_offset = e;
    seg.text = utf8::encode(std::u32string_view(s).substr(b, e - b));
    for (std::size_t k = b; k < e; ++k) {
      if (is_letter(classify_char(s[k]))) ++seg.letter_count;
    }
    seg.code_block = code;
    out.push_back(std::move(seg));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  bool line_start = true;
  while (i < n) {
    if (line_start && fence_at(s, i)) {
      emit(start, i, false);
      std::size_t j = line_end(s, i);
      std::size_t close = n;
      while (j < n) {
        if (fence_at(s, j)) {
          close = line_end(s, j);
          break;
        }
        j = line_end(s, j);
      }
      emit(i, close, true);
      start = i = close;
      line_start = true;
      continue;
    }
    const char32_t c = s[i];
    if (c == U'\n') {
      emit(start, i, false);
      start = i = i + 1;
      line_start = true;
      continue;
    }
    line_start = false;
    bool ends = false;
    if (is_strong_terminator(c)) {
      ends = true;
    } else if (is_ascii_terminator(c)) {
      std::size_t k = i + 1;
      while (k < n && (is_ascii_terminator(s[k]) || is_strong_terminator(s[k]))) ++k;
      ends = k == n || is_space(s[k]) || is_closer(s[k]);
    }
    if (!ends) {
      ++i;
      continue;
    }
    std::size_t k = i + 1;
    while (k < n && (is_ascii_terminator(s[k]) || is_strong_terminator(s[k]) || is_closer(s[k]))) ++k;
    emit(start, k, false);
    start = i = k;
  }
  emit(start, n, false);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> tile_spans(const std::vector<Segment>& segments,
                                                            std::size_t text_length) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(segments.size());
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const std::size_t b = k == 0 ? 0 : segments[k].start_offset;
    const std::size_t e = k + 1 < segments.size() ? segments[k + 1].start_offset : text_length;
    spans.emplace_back(b, e);
  }
  return spans;
}

}  // namespace ola
