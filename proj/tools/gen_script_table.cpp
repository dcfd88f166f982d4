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

// Regenerates src/script_table.inc from the ICU character database.
//
//   g++ -std=c++20 tools/gen_script_table.cpp -licuuc -o /tmp/gen
//   /tmp/gen > src/script_table.inc

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/uversion.h>

#include <cstdint>
#include <cstdio>
#include <vector>

namespace {

// Must stay in sync with ola::ScriptClass.
enum Cls : int {
  kLatin, kHangul, kHan, kKana, kCyrillic, kDevanagari, kArabic, kThai,
  kHebrew, kDigit, kPunctuation, kWhitespace, kOtherLetter, kOtherSymbol
};

const char* kNames[] = {"Latin", "Hangul", "Han", "Kana", "Cyrillic",
                        "Devanagari", "Arabic", "Thai", "Hebrew", "Digit",
                        "Punctuation", "Whitespace", "OtherLetter",
                        "OtherSymbol"};

int from_script(UScriptCode sc) {
  switch (sc) {
    case USCRIPT_LATIN: return kLatin;
    case USCRIPT_HANGUL: return kHangul;
    case USCRIPT_HAN: return kHan;
    case USCRIPT_HIRAGANA:
    case USCRIPT_KATAKANA:
    case USCRIPT_KATAKANA_OR_HIRAGANA: return kKana;
    case USCRIPT_CYRILLIC: return kCyrillic;
    case USCRIPT_DEVANAGARI: return kDevanagari;
    case USCRIPT_ARABIC: return kArabic;
    case USCRIPT_THAI: return kThai;
    case USCRIPT_HEBREW: return kHebrew;
    default: return kOtherLetter;
  }
}

int classify(UChar32 c) {
  if (u_hasBinaryProperty(c, UCHAR_WHITE_SPACE)) return kWhitespace;
  const auto gc = static_cast<UCharCategory>(u_charType(c));
  switch (gc) {
    case U_DECIMAL_DIGIT_NUMBER: return kDigit;
    case U_UPPERCASE_LETTER: case U_LOWERCASE_LETTER: case U_TITLECASE_LETTER:
    case U_MODIFIER_LETTER: case U_OTHER_LETTER: case U_NON_SPACING_MARK:
    case U_COMBINING_SPACING_MARK: case U_ENCLOSING_MARK: {
      UErrorCode err = U_ZERO_ERROR;
      const UScriptCode sc = uscript_getScript(c, &err);
      if (sc != USCRIPT_COMMON && sc != USCRIPT_INHERITED) return from_script(sc);
      // Common/Inherited letters whose extensions name a single class
      // (e.g. the prolonged sound mark used by both kana) take that class.
      UScriptCode ext[16];
      err = U_ZERO_ERROR;
      const int n = uscript_getScriptExtensions(c, ext, 16, &err);
      int cls = -1;
      for (int i = 0; i < n; ++i) {
        if (ext[i] == USCRIPT_COMMON || ext[i] == USCRIPT_INHERITED) { cls = -1; break; }
        const int k = from_script(ext[i]);
        if (cls == -1) cls = k;
        else if (cls != k) { cls = -1; break; }
      }
      return cls == -1 ? kOtherLetter : cls;
    }
    case U_CONNECTOR_PUNCTUATION: case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION: case U_END_PUNCTUATION:
    case U_INITIAL_PUNCTUATION: case U_FINAL_PUNCTUATION:
    case U_OTHER_PUNCTUATION: return kPunctuation;
    default: return kOtherSymbol;
  }
}

}  // namespace

int main() {
  struct Range { UChar32 first, last; int cls; };
  std::vector<Range> ranges;
  for (UChar32 c = 0; c <= 0x10FFFF; ++c) {
    if (c >= 0xD800 && c <= 0xDFFF) continue;
    const int cls = classify(c);
    if (cls == kOtherSymbol) continue;
    if (!ranges.empty() && ranges.back().cls == cls && ranges.back().last + 1 == c)
      ranges.back().last = c;
    else
      ranges.push_back({c, c, cls});
  }
  std::fputs(
              "// Licensed under the Apache License, Version 2.0 (the \"License\");\n"
              "// you may not use this file except in compliance with the License.\n"
              "// You may obtain a copy of the License at\n"
              "//\n"
              "//     http://www.apache.org/licenses/LICENSE-2.0\n"
              "//\n"
              "// Unless required by applicable law or agreed to in writing, software\n"
              "// distributed under the License is distributed on an \"AS IS\" BASIS,\n"
              "// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.\n"
              "// See the License for the specific language governing permissions and\n"
              "// limitations under the License.\n"
              "\n",
             stdout);
  std::printf("// Generated by tools/gen_script_table.cpp from the ICU %s character\n"
              "// database (Unicode %s). Do not edit by hand.\n"
              "// Code points not covered by a range are OtherSymbol.\n",
              U_ICU_VERSION, U_UNICODE_VERSION);
  for (const auto& r : ranges)
    std::printf("{0x%04X, 0x%04X, ScriptClass::%s},\n", static_cast<unsigned>(r.first),
                static_cast<unsigned>(r.last), kNames[r.cls]);
  return 0;
}
