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

// UTF-8 helpers. Offsets throughout the toolkit are code point indices.

namespace ola::utf8 {

/// Decodes UTF-8; malformed sequences become U+FFFD.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);

void append(std::string& out, char32_t cp);

/// NFC normalization (ICU).
std::string normalize_nfc(std::string_view text);

/// Full Unicode case folding (ICU).
std::string fold_case(std::string_view text);

/// Code point count of a UTF-8 string.
std::size_t length(std::string_view text);

}  // namespace ola::utf8
