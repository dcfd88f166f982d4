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

#include <stdexcept>
#include <string>

namespace ola {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OLA_DEFINE_ERROR(Name)                 \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  }

OLA_DEFINE_ERROR(InvalidLanguage);
OLA_DEFINE_ERROR(MissingLanguage);
OLA_DEFINE_ERROR(EmptyResponse);
OLA_DEFINE_ERROR(JudgeUnavailable);
OLA_DEFINE_ERROR(JudgeParseError);
OLA_DEFINE_ERROR(EmptyGroupSet);
OLA_DEFINE_ERROR(UndeterminedVerdict);
OLA_DEFINE_ERROR(DegenerateTable);
OLA_DEFINE_ERROR(UnpairedItem);
OLA_DEFINE_ERROR(EmptyInput);
OLA_DEFINE_ERROR(EmptyTemplate);
OLA_DEFINE_ERROR(GenerationRejected);
OLA_DEFINE_ERROR(NoPairPossible);
OLA_DEFINE_ERROR(CacheOnlyMiss);
OLA_DEFINE_ERROR(MissingTemplate);
OLA_DEFINE_ERROR(CotParseError);
OLA_DEFINE_ERROR(ConfigError);
OLA_DEFINE_ERROR(StageDependencyMissing);
OLA_DEFINE_ERROR(ValidationError);
OLA_DEFINE_ERROR(FormatError);

#undef OLA_DEFINE_ERROR

/// Raised when a chat endpoint keeps failing after all retries.
class LlmError : public Error {
 public:
  LlmError(int status, int attempts, const std::string& detail)
      : Error("LlmError: status " + std::to_string(status) + " after " +
              std::to_string(attempts) + " attempt(s): " + detail),
        status_(status),
        attempts_(attempts) {}

  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

}  // namespace ola
