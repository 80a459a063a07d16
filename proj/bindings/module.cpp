#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "courtrel/chunker.hpp"
#include "courtrel/corpus.hpp"
#include "courtrel/errors.hpp"
#include "courtrel/grouping.hpp"
#include "courtrel/harness.hpp"
#include "courtrel/pipeline.hpp"
#include "courtrel/relext.hpp"
#include "courtrel/report.hpp"
#include "courtrel/stats.hpp"
#include "courtrel/version.hpp"

namespace py = pybind11;
using namespace courtrel;

namespace {

const RuleTagger& default_tagger() {
  static const RuleTagger tagger;
  return tagger;
}

std::vector<std::pair<std::string, std::string>> tag_sentence(const std::string& sentence) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : default_tagger().tag(tokenize(sentence))) {
    out.emplace_back(t.surface, std::string(to_string(t.tag)));
  }
  return out;
}

std::vector<std::string> chunk_sentence(const std::string& sentence) {
  std::vector<std::string> out;
  for (const auto& np : analyze_sentence(sentence, default_tagger()).chunks) {
    out.push_back(np.canonical);
  }
  return out;
}

using Triple = std::tuple<std::string, std::string, std::string, std::string>;

std::vector<Triple> extract_sentence(const std::string& sentence, const PatternPack* pack) {
  const PatternPack& use = pack ? *pack : PatternPack::builtin();
  std::vector<Triple> out;
  for (const auto& inst : extract(analyze_sentence(sentence, default_tagger()), use)) {
    out.emplace_back(std::string(to_string(inst.relation)), inst.left, inst.right,
                     inst.pattern_id);
  }
  return out;
}

RelationInstance triple_to_instance(const py::tuple& t) {
  if (t.size() != 6) {
    throw py::value_error("expected (case_id, utt, sent, relation, left, right)");
  }
  RelationInstance inst;
  inst.case_id = t[0].cast<std::string>();
  inst.utterance_index = t[1].cast<int>();
  inst.sentence_index = t[2].cast<int>();
  auto rel = relation_from_string(t[3].cast<std::string>());
  if (!rel) throw py::value_error("unknown relation " + t[3].cast<std::string>());
  inst.relation = *rel;
  inst.left = t[4].cast<std::string>();
  inst.right = t[5].cast<std::string>();
  return inst;
}

py::dict score_triples(const std::vector<py::tuple>& predicted,
                       const std::vector<py::tuple>& gold, bool macro) {
  std::vector<RelationInstance> p, g;
  for (const auto& t : predicted) p.push_back(triple_to_instance(t));
  for (const auto& t : gold) g.push_back(triple_to_instance(t));
  EvalReport report = score(p, g, macro);
  py::dict out;
  out["precision"] = report.overall.precision;
  out["recall"] = report.overall.recall;
  out["f1"] = report.overall.f1;
  py::dict per;
  for (const auto& [rel, sc] : report.per_relation) {
    py::dict d;
    d["precision"] = sc.precision;
    d["recall"] = sc.recall;
    d["f1"] = sc.f1;
    d["predicted"] = sc.predicted;
    d["gold"] = sc.gold;
    d["matched"] = sc.matched;
    per[py::str(std::string(to_string(rel)))] = d;
  }
  out["per_relation"] = per;
  return out;
}

std::vector<std::vector<double>> pmi_from_counts(
    const std::vector<std::vector<std::int64_t>>& counts, double smoothing,
    const std::string& base) {
  if (counts.empty()) throw py::value_error("counts must be a non-empty matrix");
  ContingencyTable table(counts.size(), counts.front().size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (counts[r].size() != counts.front().size()) {
      throw py::value_error("counts rows must have equal length");
    }
    for (std::size_t c = 0; c < counts[r].size(); ++c) table.add(r, c, counts[r][c]);
  }
  LogBase lb = base == "2" ? LogBase::Two : LogBase::Natural;
  return pmi_matrix(table, smoothing, lb).values;
}

py::dict partition_dict(const Corpus& corpus) {
  Partition p = make_partition(corpus);
  py::dict out;
  for (Kappa k : kAllKappas) {
    py::list refs;
    for (const auto& ref : p.pool(k)) {
      refs.append(py::make_tuple(ref.case_id, ref.index));
    }
    out[py::str(std::string(1, to_char(k)))] = refs;
  }
  return out;
}

std::vector<std::tuple<std::string, std::string, std::string, std::string, int, int>>
extract_corpus_py(const Corpus& corpus, const PatternPack* pack, int threads) {
  Partition partition = make_partition(corpus);
  const PatternPack& use = pack ? *pack : PatternPack::builtin();
  std::vector<std::tuple<std::string, std::string, std::string, std::string, int, int>> out;
  for (const auto& inst :
       extract_corpus(corpus, partition, std::nullopt, use, default_tagger(), threads)) {
    out.emplace_back(std::string(to_string(inst.relation)), inst.left, inst.right,
                     inst.case_id, inst.utterance_index, inst.sentence_index);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_courtrel, m) {
  m.doc() = "Courtroom conversation pools, rule-based relation extraction and PMI";
  m.attr("__version__") = kVersion;

  py::register_exception<PatternError>(m, "PatternError");
  py::register_exception<InputError>(m, "InputError");

  py::class_<PatternPack>(m, "PatternPack")
      .def_static("builtin", [] { return PatternPack::builtin(); })
      .def("__len__", [](const PatternPack& p) { return p.patterns.size(); })
      .def("ids", [](const PatternPack& p) {
        std::vector<std::string> ids;
        for (const auto& pat : p.patterns) ids.push_back(pat.id);
        return ids;
      });

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("num_cases", [](const Corpus& c) { return c.cases.size(); })
      .def_property_readonly("num_utterances",
                             [](const Corpus& c) { return c.utterances.size(); })
      .def_property_readonly("num_sentences",
                             [](const Corpus& c) { return c.diagnostics.sentences; });

  m.def("sentence_split", [](const std::string& text) { return sentence_split(text); },
        py::arg("text"), "Split utterance text into sentences.");
  m.def("tokenize", [](const std::string& sentence) {
          std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
          for (const auto& t : tokenize(sentence)) out.emplace_back(t.surface, t.begin, t.end);
          return out;
        },
        py::arg("sentence"), "Tokenize one sentence into (surface, begin, end).");
  m.def("tag", &tag_sentence, py::arg("sentence"),
        "Tokenize and tag one sentence with the builtin rule tagger.");
  m.def("chunk", &chunk_sentence, py::arg("sentence"),
        "Canonical noun phrases of one sentence.");
  m.def("compile_patterns", [](const std::string& text) { return compile_patterns(text); },
        py::arg("text"), "Compile a pattern pack from DSL text.");
  m.def("default_patterns_text", [] { return std::string(PatternPack::builtin_text()); });
  m.def("extract", &extract_sentence, py::arg("sentence"), py::arg("patterns") = nullptr,
        "Relation instances (relation, left, right, pattern_id) from one sentence.");
  m.def("load_corpus", [](const std::string& path) { return load_corpus(path); },
        py::arg("path"));
  m.def("partition", &partition_dict, py::arg("corpus"),
        "Pool assignments {A|B|C|D: [(case_id, utterance_index), ...]}.");
  m.def("extract_corpus", &extract_corpus_py, py::arg("corpus"),
        py::arg("patterns") = nullptr, py::arg("threads") = 1);
  m.def("pmi_from_counts", &pmi_from_counts, py::arg("counts"), py::arg("smoothing") = 0.0,
        py::arg("base") = "e",
        "PMI matrix from an integer count matrix; zero cells give -inf.");
  m.def("score", &score_triples, py::arg("predicted"), py::arg("gold"),
        py::arg("macro") = false,
        "P/R/F1 for (case_id, utt, sent, relation, left, right) triples.");
  m.def("run_pipeline", [](const std::string& corpus, const std::string& out_dir,
                           const std::string& patterns, double smoothing,
                           const std::string& log_base, int threads) {
          PipelineConfig config;
          config.corpus_path = corpus;
          config.output_dir = out_dir;
          config.pattern_path = patterns;
          config.smoothing = smoothing;
          config.log_base = log_base == "2" ? LogBase::Two : LogBase::Natural;
          config.threads = threads;
          RunSummary s = run_pipeline(config);
          py::dict out;
          out["cases"] = s.load.cases;
          out["utterances"] = s.load.utterances;
          out["instances"] = s.instances;
          return out;
        },
        py::arg("corpus"), py::arg("out_dir"), py::arg("patterns") = "",
        py::arg("smoothing") = 0.0, py::arg("log_base") = "e", py::arg("threads") = 1);
}
