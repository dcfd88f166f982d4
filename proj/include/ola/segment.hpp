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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ola {

/// A trimmed sentence-like span of a text. Offsets are code point indices,
/// `end_offset` exclusive.
struct Segment {
  std::string text;
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
  std::size_t letter_count = 0;
  bool code_block = false;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Splits on terminal punctuation (. ! ? … 。 ！ ？) and newlines.
///
/// ASCII terminators only end a sentence when followed by whitespace, the
/// end of text or a closing quote/bracket, so "3.14" and "a.b" stay intact.
/// Runs of terminators and the closers that follow them stay with the
/// sentence. A fenced markdown code block (``` ... ```) is one segment.
std::vector<Segment> segment_sentences(std::string_view text);

/// Extends each segment to the start of the next one (the first one also
/// back to offset 0, the last one to `text_length`), so the spans tile the
/// whole text. Segments must be ordered and non-overlapping.
std::vector<std::pair<std::size_t, std::size_t>> tile_spans(
    const std::vector<Segment>& segments, std::size_t text_length);

}  // namespace ola
