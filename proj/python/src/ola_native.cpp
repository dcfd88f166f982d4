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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "ola/dataset.hpp"
#include "ola/errors.hpp"
#include "ola/evaluation.hpp"
#include "ola/lid.hpp"
#include "ola/pipeline.hpp"
#include "ola/prompts.hpp"
#include "ola/records.hpp"
#include "ola/report.hpp"
#include "ola/script.hpp"
#include "ola/segment.hpp"
#include "ola/stats.hpp"
#include "ola/taxonomy.hpp"
#include "ola/utf8.hpp"

namespace py = pybind11;
using namespace ola;

namespace {

py::object to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get_ref<const std::string&>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default: throw FormatError("unsupported JSON value");
  }
}

Json from_py(const py::handle& o) {
  if (o.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(o)) return o.cast<bool>();
  if (py::isinstance<py::int_>(o)) return o.cast<std::int64_t>();
  if (py::isinstance<py::float_>(o)) return o.cast<double>();
  if (py::isinstance<py::str>(o)) return o.cast<std::string>();
  if (py::isinstance<py::dict>(o)) {
    Json out = Json::object();
    for (const auto& [k, v] : o.cast<py::dict>()) out[py::str(k).cast<std::string>()] = from_py(v);
    return out;
  }
  if (py::isinstance<py::list>(o) || py::isinstance<py::tuple>(o)) {
    Json out = Json::array();
    for (const auto& v : o) out.push_back(from_py(v));
    return out;
  }
  throw py::type_error("cannot convert " + std::string(py::str(py::type::handle_of(o))) + " to JSON");
}

py::object code_or_none(const std::optional<Language>& l) {
  return l ? py::object(py::str(l->code())) : py::none();
}

std::set<Language> language_set(const std::vector<std::string>& codes) {
  std::set<Language> out;
  for (const auto& c : codes) out.insert(Language(c));
  return out;
}

ScriptClass script_arg(const std::string& name) {
  const auto c = parse_script_class(name);
  if (!c) throw ValidationError("unknown script class '" + name + "'");
  return *c;
}

BoundaryPosition position_arg(const std::string& s) {
  if (s == "first") return BoundaryPosition::First;
  if (s == "last") return BoundaryPosition::Last;
  throw ValidationError("position must be 'first' or 'last'");
}

py::dict segment_dict(const Segment& s) {
  py::dict d;
  d["text"] = s.text;
  d["start"] = s.start_offset;
  d["end"] = s.end_offset;
  d["letters"] = s.letter_count;
  d["code_block"] = s.code_block;
  return d;
}

py::dict verdict_dict(const ResponseLangVerdict& v) {
  py::list sentences;
  for (const auto& sl : v.sentence_labels) {
    auto d = segment_dict(sl.segment);
    d["lang"] = code_or_none(sl.prediction.label);
    d["confidence"] = sl.prediction.confidence;
    d["source"] = std::string(lid_source_name(sl.prediction.source));
    d["votes"] = sl.votes;
    sentences.append(d);
  }
  py::dict counts;
  for (const auto& [l, n] : v.voted_count) counts[py::str(l.code())] = n;
  py::dict out;
  out["primary"] = code_or_none(v.primary);
  out["tie_broken"] = v.tie_broken;
  out["voted_count"] = counts;
  out["sentences"] = sentences;
  return out;
}

/// Sentence-level identifier handed to Python as an opaque object.
struct Identifier {
  std::shared_ptr<const LidBackend> backend;
};

Identifier identifier_from_corpus(const std::string& dir, double shortcut_threshold) {
  LidSettings s;
  s.corpus_dir = dir;
  s.config.shortcut_threshold = shortcut_threshold;
  if (!std::filesystem::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir);
  return {make_backend(s)};
}

Identifier identifier_from_model(const std::string& path, double shortcut_threshold) {
  LidConfig cfg;
  cfg.shortcut_threshold = shortcut_threshold;
  return {std::make_shared<BuiltinLidBackend>(std::make_shared<const NgramModel>(NgramModel::load_file(path)), cfg)};
}

}  // namespace

PYBIND11_MODULE(_ola_native, m) {
  m.doc() = "Native core of the output-language alignment toolkit.";
  m.attr("__version__") = kToolVersion;

  static py::exception<Error> base(m, "OlaError");
#define OLA_PY_ERROR(Name) py::register_exception<Name>(m, #Name, base.ptr())
  OLA_PY_ERROR(InvalidLanguage);
  OLA_PY_ERROR(MissingLanguage);
  OLA_PY_ERROR(EmptyResponse);
  OLA_PY_ERROR(JudgeUnavailable);
  OLA_PY_ERROR(EmptyGroupSet);
  OLA_PY_ERROR(UndeterminedVerdict);
  OLA_PY_ERROR(DegenerateTable);
  OLA_PY_ERROR(EmptyInput);
  OLA_PY_ERROR(MissingTemplate);
  OLA_PY_ERROR(CotParseError);
  OLA_PY_ERROR(ConfigError);
  OLA_PY_ERROR(StageDependencyMissing);
  OLA_PY_ERROR(ValidationError);
  OLA_PY_ERROR(FormatError);
  OLA_PY_ERROR(LlmError);
#undef OLA_PY_ERROR

  m.def(
      "classify_char",
      [](const std::string& ch) {
        const auto cps = utf8::decode(ch);
        if (cps.size() != 1) throw ValidationError("expected exactly one character");
        return std::string(script_name(classify_char(cps[0])));
      },
      py::arg("ch"));

  m.def(
      "script_profile",
      [](const std::string& text) {
        const auto p = script_profile(text);
        py::dict counts, ratios;
        for (std::size_t i = 0; i < kScriptClassCount; ++i)
          if (p.counts[i]) counts[py::str(script_name(static_cast<ScriptClass>(i)))] = p.counts[i];
        for (const auto& [c, r] : p.ratios) ratios[py::str(script_name(c))] = r;
        const auto dom = p.dominant_letter_class();
        py::dict out;
        out["counts"] = counts;
        out["letter_total"] = p.letter_total;
        out["ratios"] = ratios;
        out["dominant"] = dom ? py::object(py::str(script_name(*dom))) : py::none();
        return out;
      },
      py::arg("text"), "Per-script character counts and letter ratios.");

  m.def(
      "boundary_token",
      [](const std::string& text, const std::string& position) -> py::object {
        const auto t = boundary_token(text, position_arg(position));
        if (!t) return py::none();
        return py::make_tuple(t->text, std::string(script_name(t->script)));
      },
      py::arg("text"), py::arg("position") = "last");

  m.def(
      "segment_sentences",
      [](const std::string& text) {
        py::list out;
        for (const auto& s : segment_sentences(text)) out.append(segment_dict(s));
        return out;
      },
      py::arg("text"));

  py::class_<Identifier>(m, "LanguageIdentifier")
      .def_static("from_corpus", &identifier_from_corpus, py::arg("corpus_dir"),
                  py::arg("shortcut_threshold") = 0.8)
      .def_static("from_model", &identifier_from_model, py::arg("model_path"),
                  py::arg("shortcut_threshold") = 0.8)
      .def(
          "identify_sentence",
          [](const Identifier& id, const std::string& text) {
            Segment seg{text, 0, utf8::decode(text).size(), script_profile(text).letter_total, false};
            const auto p = id.backend->identify(seg, {}, 0);
            return py::make_tuple(code_or_none(p.label), p.confidence, std::string(lid_source_name(p.source)));
          },
          py::arg("text"))
      .def(
          "verdict",
          [](const Identifier& id, const std::string& text) {
            return verdict_dict(response_verdict(text, *id.backend, {}));
          },
          py::arg("text"), "Primary language of a response with per-sentence labels.");

  m.def(
      "judge",
      [](const py::dict& prompt, const py::dict& response, const Identifier& id) {
        const auto p = prompt_from_json(from_py(prompt));
        p.validate();
        const auto r = response_from_json(from_py(response));
        VerdictRecord v;
        v.result = judge(p, r, *id.backend, {});
        if (v.result.verdict.determined() && v.result.expected.language())
          v.pattern = classify_pattern(v.result.verdict, *v.result.expected.language());
        return to_py(to_json(v));
      },
      py::arg("prompt"), py::arg("response"), py::arg("lid"),
      "Scores one response against its prompt's expected language.");

  m.def(
      "classify_pattern",
      [](const std::string& text, const std::string& expected, const Identifier& id) {
        return std::string(to_string(classify_pattern(response_verdict(text, *id.backend, {}), Language(expected))));
      },
      py::arg("text"), py::arg("expected"), py::arg("lid"));

  m.def(
      "detect_intrusions",
      [](const std::string& text, const std::string& expected, const std::vector<std::string>& prompt_langs,
         const Identifier& id, std::optional<std::vector<std::string>> exclusions) {
        const auto excl = exclusions ? language_set(*exclusions) : default_exclusions();
        const auto rep = detect_intrusions(text, Language(expected), language_set(prompt_langs), excl, *id.backend, {});
        py::list sentences, chars;
        for (const auto& h : rep.sentence_hits) sentences.append(py::make_tuple(h.segment_index, h.language.code()));
        for (const auto& h : rep.char_hits) {
          py::dict d;
          d["start"] = h.start;
          d["end"] = h.end;
          d["script"] = std::string(script_name(h.script));
          d["lang"] = h.mapped.code();
          d["text"] = h.text;
          chars.append(d);
        }
        py::dict out;
        out["sentence_hits"] = sentences;
        out["char_hits"] = chars;
        return out;
      },
      py::arg("text"), py::arg("expected"), py::arg("prompt_langs"), py::arg("lid"),
      py::arg("exclusions") = py::none());

  m.def(
      "chi_square_2x2",
      [](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        const auto t = chi_square_2x2({a, b, c, d});
        return py::make_tuple(t.statistic, t.p);
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), "Pearson statistic and p-value, 1 dof.");

  m.def(
      "script_ratio",
      [](const std::string& text, const std::string& script) { return script_profile(text).ratio(script_arg(script)); },
      py::arg("text"), py::arg("script"));

  m.def(
      "validate_cs_prompt",
      [](const std::string& text, const std::string& matrix, const std::string& embedded) {
        py::list out;
        for (const auto& v : validate_cs_prompt(text, Language(matrix), Language(embedded)))
          out.append(py::make_tuple(v.code, v.detail));
        return out;
      },
      py::arg("text"), py::arg("matrix"), py::arg("embedded"));

  m.def(
      "assemble_prompt",
      [](const py::dict& prompt, const std::string& condition, std::optional<std::string> prompt_dir) {
        const auto p = prompt_from_json(from_py(prompt));
        const auto catalog = prompt_dir ? PromptCatalog::with_overrides(*prompt_dir) : PromptCatalog::builtin();
        py::list out;
        for (const auto& msg : assemble_prompt(p, parse_condition(condition), catalog)) {
          py::dict d;
          d["role"] = msg.role;
          d["content"] = msg.content;
          out.append(d);
        }
        return out;
      },
      py::arg("prompt"), py::arg("condition") = "Baseline", py::arg("prompt_dir") = py::none());

  m.def(
      "format_rate", [](std::uint64_t passes, std::uint64_t n) { return Rate{passes, n}.str(); },
      py::arg("passes"), py::arg("n"));
  m.def(
      "diff_cell",
      [](std::pair<std::uint64_t, std::uint64_t> before, std::pair<std::uint64_t, std::uint64_t> after) {
        return diff_cell({before.first, before.second}, {after.first, after.second});
      },
      py::arg("before"), py::arg("after"));

  m.def(
      "aggregate_annotations",
      [](const py::list& records, std::size_t min_agree) {
        std::vector<AnnotationRecord> rs;
        for (const auto& r : records) rs.push_back(annotation_from_json(from_py(r)));
        const auto o = aggregate_annotations(rs, min_agree);
        py::dict accepted;
        for (const auto& [id, e] : o.accepted) accepted[py::str(id)] = e.str();
        py::dict out;
        out["accepted"] = accepted;
        out["rejected"] = o.rejected;
        out["severe"] = py::make_tuple(o.severe.passes, o.severe.n);
        return out;
      },
      py::arg("records"), py::arg("min_agree") = 2);

  m.def(
      "run_pipeline",
      [](const std::string& config_path, const std::string& stage, std::optional<std::string> out_dir,
         bool offline) {
        auto cfg = RunConfig::load(config_path);
        if (out_dir) cfg.out_dir = std::filesystem::absolute(*out_dir).string();
        cfg.offline = cfg.offline || offline;
        std::vector<StageReport> reports;
        {
          py::gil_scoped_release release;
          Pipeline p(std::move(cfg));
          reports = p.run(parse_stage(stage));
        }
        py::list out;
        for (const auto& r : reports) {
          py::dict d;
          d["stage"] = std::string(to_string(r.stage));
          d["artifacts"] = r.artifacts;
          d["failures"] = r.failures;
          out.append(d);
        }
        return out;
      },
      py::arg("config_path"), py::arg("stage") = "all", py::arg("out_dir") = py::none(),
      py::arg("offline") = false);
}
