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

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

// Line-delimited JSON persistence and content digests.

namespace ola::jsonl {

/// Reads every non-blank line; throws FormatError with file:line on bad JSON.
std::vector<nlohmann::json> read(const std::string& path);

/// Writes one compact JSON value per line (keys sorted, UTF-8 verbatim).
void write(const std::string& path, const std::vector<nlohmann::json>& rows);

/// Appends a single row and flushes.
void append(const std::string& path, const nlohmann::json& row);

std::string dump(const nlohmann::json& value);

}  // namespace ola::jsonl

namespace ola {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's contents.
std::string file_digest(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_now_iso();

}  // namespace ola
