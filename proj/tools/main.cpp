#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "courtrel/builtin_data.hpp"
#include "courtrel/chunker.hpp"
#include "courtrel/errors.hpp"
#include "courtrel/harness.hpp"
#include "courtrel/pipeline.hpp"
#include "courtrel/report.hpp"
#include "courtrel/util.hpp"
#include "courtrel/version.hpp"

namespace {

using namespace courtrel;

struct Options {
  std::string config_path;
  std::string corpus;
  std::string patterns;
  std::string lexicon;
  std::string out = "out";
  double smooth = 0.0;
  std::string log_base = "e";
  std::uint64_t seed = 0;
  int threads = 1;
};

struct OptionHandles {
  CLI::Option* corpus = nullptr;
  CLI::Option* patterns = nullptr;
  CLI::Option* lexicon = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* smooth = nullptr;
  CLI::Option* log_base = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* threads = nullptr;
};

// Config-file values fill in whatever was not given on the command line.
void apply_config_file(Options& opt, const OptionHandles& given) {
  if (opt.config_path.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(opt.config_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config " + opt.config_path + ": " + e.what());
  }
  auto str = [&](const char* key, std::string& target, CLI::Option* o) {
    if (o->count() == 0 && j.contains(key) && j[key].is_string()) {
      target = j[key].get<std::string>();
    }
  };
  str("corpus", opt.corpus, given.corpus);
  str("patterns", opt.patterns, given.patterns);
  str("lexicon", opt.lexicon, given.lexicon);
  str("out", opt.out, given.out);
  str("log_base", opt.log_base, given.log_base);
  if (given.smooth->count() == 0 && j.contains("smooth")) {
    opt.smooth = j["smooth"].get<double>();
  }
  if (given.seed->count() == 0 && j.contains("seed")) {
    opt.seed = j["seed"].get<std::uint64_t>();
  }
  if (given.threads->count() == 0 && j.contains("threads")) {
    opt.threads = j["threads"].get<int>();
  }
}

PipelineConfig to_pipeline_config(const Options& opt) {
  PipelineConfig config;
  config.corpus_path = opt.corpus;
  config.pattern_path = opt.patterns;
  config.lexicon_path = opt.lexicon;
  config.smoothing = opt.smooth;
  if (opt.log_base == "e") {
    config.log_base = LogBase::Natural;
  } else if (opt.log_base == "2") {
    config.log_base = LogBase::Two;
  } else {
    throw InputError("--log-base must be e or 2");
  }
  config.seed = opt.seed;
  config.output_dir = opt.out;
  config.threads = opt.threads > 0 ? opt.threads : 1;
  return config;
}

struct LoadedStages {
  Corpus corpus;
  Partition partition;
  Lexicon user_lexicon;
  const Lexicon* lexicon = nullptr;
  PatternPack user_pack;
  const PatternPack* pack = nullptr;
};

LoadedStages load_stages(const PipelineConfig& config) {
  LoadedStages s;
  if (config.corpus_path.empty()) throw InputError("no corpus given (--corpus)");
  s.corpus = load_corpus(config.corpus_path);
  s.partition = make_partition(s.corpus);
  if (config.lexicon_path.empty()) {
    s.lexicon = &Lexicon::builtin();
  } else {
    s.user_lexicon.load_tsv(builtin::closed_lexicon_text(), true, "<builtin closed>");
    s.user_lexicon.load_tsv(builtin::content_lexicon_text(), false, "<builtin content>");
    s.user_lexicon.load_tsv_file(config.lexicon_path, false);
    s.lexicon = &s.user_lexicon;
  }
  if (config.pattern_path.empty()) {
    s.pack = &PatternPack::builtin();
  } else {
    s.user_pack = load_patterns(config.pattern_path);
    s.pack = &s.user_pack;
  }
  return s;
}

std::string instance_row(const RelationInstance& inst) {
  return csv_row({std::string(to_string(inst.relation)), inst.left, inst.right,
                  inst.case_id, std::to_string(inst.utterance_index),
                  std::to_string(inst.sentence_index), inst.pattern_id});
}

int cmd_ingest(const Options& opt) {
  auto config = to_pipeline_config(opt);
  Corpus corpus = load_corpus(config.corpus_path);
  OutputDir out(config.output_dir);
  std::string diag = "metric,value\n";
  diag += csv_row({"cases", std::to_string(corpus.diagnostics.cases)});
  diag += csv_row({"utterances", std::to_string(corpus.diagnostics.utterances)});
  diag += csv_row({"exchanges", std::to_string(corpus.diagnostics.exchanges())});
  diag += csv_row({"sentences", std::to_string(corpus.diagnostics.sentences)});
  out.write("ingest_diagnostics.csv", diag);
  std::string normalized;
  for (const auto& [id, meta] : corpus.cases) normalized += serialize_record(meta) + "\n";
  for (const auto& u : corpus.utterances) normalized += serialize_record(u) + "\n";
  out.write("corpus.jsonl", normalized);
  out.finalize(config);
  std::cout << "cases=" << corpus.diagnostics.cases
            << " utterances=" << corpus.diagnostics.utterances
            << " exchanges=" << corpus.diagnostics.exchanges()
            << " sentences=" << corpus.diagnostics.sentences << "\n";
  return 0;
}

int cmd_partition(const Options& opt) {
  auto config = to_pipeline_config(opt);
  Corpus corpus = load_corpus(config.corpus_path);
  Partition partition = make_partition(corpus);
  OutputDir out(config.output_dir);
  std::string rows = "pool,case_id,utterance_index\n";
  for (Kappa k : kAllKappas) {
    for (const auto& ref : partition.pool(k)) {
      rows += csv_row({std::string(1, to_char(k)), ref.case_id, std::to_string(ref.index)});
    }
  }
  out.write("partition.csv", rows);
  std::string diag = "pool,utterances,lawsuits\n";
  for (Kappa k : kAllKappas) {
    const auto& d = partition.diagnostics[static_cast<int>(k)];
    diag += csv_row({std::string(1, to_char(k)), std::to_string(d.utterances),
                     std::to_string(d.lawsuits)});
  }
  out.write("partition_diagnostics.csv", diag);
  out.finalize(config);
  for (Kappa k : kAllKappas) {
    const auto& d = partition.diagnostics[static_cast<int>(k)];
    std::cout << to_char(k) << ": utterances=" << d.utterances
              << " lawsuits=" << d.lawsuits << "\n";
  }
  if (partition.excluded) {
    std::cerr << "warning: " << partition.excluded
              << " justice utterances lacked an addressee and were excluded\n";
  }
  return 0;
}

int cmd_extract(const Options& opt, const std::string& pool_name) {
  auto config = to_pipeline_config(opt);
  LoadedStages s = load_stages(config);
  RuleTagger tagger(*s.lexicon);

  std::optional<Kappa> pool;
  if (pool_name != "all") {
    auto k = kappa_from_char(pool_name.size() == 1 ? pool_name[0] : '?');
    if (!k) throw InputError("--pool must be one of A,B,C,D,all");
    pool = *k;
  }
  std::vector<UttRef> refs;
  if (pool) {
    refs = s.partition.pool(*pool);
  } else {
    for (const auto& u : s.corpus.utterances) refs.push_back({u.case_id, u.index});
  }

  std::string rows = "relation,left,right,case_id,utt,sent,pattern_id\n";
  std::size_t count = 0;
  extract_stream(s.corpus, refs, *s.pack, tagger, config.threads,
                 [&](const RelationInstance& inst) {
                   rows += instance_row(inst);
                   ++count;
                 });
  OutputDir out(config.output_dir);
  out.write("extraction.csv", rows);
  out.finalize(config);
  std::cout << "instances=" << count << " (pool " << pool_name << ")\n";
  return 0;
}

int cmd_pmi(const Options& opt, bool with_chart) {
  auto config = to_pipeline_config(opt);
  LoadedStages s = load_stages(config);
  RuleTagger tagger(*s.lexicon);
  ContingencyTable table = pool_contingency(s.corpus, s.partition, *s.pack, tagger,
                                            config.threads);
  OutputDir out(config.output_dir);
  const std::string prefix = with_chart ? "report/" : "";
  if (table.grand_total() == 0) {
    std::cerr << "warning: no relation instances in any pool; reports are empty\n";
    out.write(prefix + "mi.csv", "relation,kappa,count,mi\n");
    out.write(prefix + "marginals.csv", marginals_csv(table));
  } else {
    PmiMatrix matrix = pmi_matrix(table, config.smoothing, config.log_base);
    out.write(prefix + "mi.csv", mi_csv(table, matrix));
    out.write(prefix + "marginals.csv", marginals_csv(table));
    if (with_chart) out.write("report/mi.svg", render_mi_chart(matrix));
  }
  out.finalize(config);
  std::cout << "N=" << table.grand_total() << "\n";
  return 0;
}

int cmd_eval(const Options& opt, const std::string& gold_path, const std::string& pool_name,
             std::size_t n, bool macro) {
  auto config = to_pipeline_config(opt);
  LoadedStages s = load_stages(config);
  RuleTagger tagger(*s.lexicon);

  auto k = kappa_from_char(pool_name.size() == 1 ? pool_name[0] : '?');
  if (!k) throw InputError("--pool must be one of A,B,C,D");
  auto sampled = sample_pool(s.partition.pool(*k), n, config.seed);
  std::sort(sampled.begin(), sampled.end());

  std::vector<RelationInstance> predicted;
  extract_stream(s.corpus, sampled, *s.pack, tagger, config.threads,
                 [&](const RelationInstance& inst) { predicted.push_back(inst); });

  std::set<std::pair<std::string, int>> sample_keys;
  for (const auto& ref : sampled) sample_keys.insert({ref.case_id, ref.index});
  std::vector<RelationInstance> gold;
  for (auto& g : load_gold(gold_path)) {
    if (sample_keys.count({g.case_id, g.utterance_index})) gold.push_back(std::move(g));
  }

  EvalReport report = score(predicted, gold, macro);
  std::string rows = "scope,relation,precision,recall,f1,predicted,gold,matched\n";
  auto emit = [&](const std::string& scope, const std::string& rel, const RelationScore& sc) {
    rows += csv_row({scope, rel, format_double(sc.precision), format_double(sc.recall),
                     format_double(sc.f1), std::to_string(sc.predicted),
                     std::to_string(sc.gold), std::to_string(sc.matched)});
  };
  emit(macro ? "overall-macro" : "overall-micro", "*", report.overall);
  for (const auto& [rel, sc] : report.per_relation) {
    emit("relation", std::string(to_string(rel)), sc);
  }
  OutputDir out(config.output_dir);
  out.write("eval.csv", rows);
  out.finalize(config);
  std::cout << "P=" << format_double(report.overall.precision)
            << " R=" << format_double(report.overall.recall)
            << " F1=" << format_double(report.overall.f1) << " (n=" << sampled.size()
            << ", pool " << pool_name << ")\n";
  return 0;
}

int cmd_synth(const Options& opt, const std::string& spec_path, const std::string& out_path) {
  SynthSpec spec = SynthSpec::parse_csv(read_file(spec_path));
  SynthResult result = synth_corpus(spec, opt.seed);
  save_corpus(result.corpus, out_path);
  std::string expected = "relation,kappa,count\n";
  for (std::size_t r = 0; r < result.expected.rows(); ++r) {
    for (std::size_t c = 0; c < result.expected.cols(); ++c) {
      expected += csv_row({std::string(to_string(static_cast<RelationType>(r))),
                           std::string(1, to_char(static_cast<Kappa>(c))),
                           std::to_string(result.expected.at(r, c))});
    }
  }
  write_file(out_path + ".expected.csv", expected);
  std::cout << "cases=" << result.corpus.cases.size()
            << " utterances=" << result.corpus.utterances.size() << " expected_N="
            << result.expected.grand_total() << "\n";
  return 0;
}

int cmd_run(const Options& opt) {
  auto config = to_pipeline_config(opt);
  RunSummary summary = run_pipeline(config);
  std::cout << "cases=" << summary.load.cases << " utterances=" << summary.load.utterances
            << " instances=" << summary.instances << "\n";
  for (Kappa k : kAllKappas) {
    const auto& d = summary.pools[static_cast<int>(k)];
    std::cout << to_char(k) << ": utterances=" << d.utterances
              << " lawsuits=" << d.lawsuits << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Courtroom conversation pools, rule-based relation extraction and "
               "relation/pool PMI reports"};
  app.set_version_flag("--version", courtrel::kVersion);
  app.fallthrough();
  app.require_subcommand(1);

  Options opt;
  OptionHandles handles;
  app.add_option("--config", opt.config_path, "JSON config file (flags override it)");
  handles.corpus = app.add_option("--corpus", opt.corpus, "corpus file (one record per line)");
  handles.patterns =
      app.add_option("--patterns", opt.patterns, "pattern DSL file (default: builtin pack)");
  handles.lexicon =
      app.add_option("--lexicon", opt.lexicon, "extra content lexicon (surface<TAB>tag)");
  handles.out = app.add_option("--out", opt.out, "output directory");
  handles.smooth = app.add_option("--smooth", opt.smooth, "additive smoothing epsilon for PMI");
  handles.log_base = app.add_option("--log-base", opt.log_base, "PMI log base: e or 2");
  handles.seed = app.add_option("--seed", opt.seed, "PRNG seed (sampling, synthesis)");
  handles.threads = app.add_option("--threads", opt.threads, "worker threads for extraction");

  auto* ingest = app.add_subcommand("ingest", "validate a corpus and report diagnostics");
  auto* partition = app.add_subcommand("partition", "write pool assignments A-D");
  auto* extract = app.add_subcommand("extract", "extract relation instances");
  std::string pool_name = "all";
  extract->add_option("--pool", pool_name, "A, B, C, D or all");
  auto* pmi = app.add_subcommand("pmi", "contingency counts and MI(R,kappa) table");
  auto* eval = app.add_subcommand("eval", "precision/recall against a gold file");
  std::string gold_path;
  std::string eval_pool = "A";
  std::size_t eval_n = 1000;
  bool macro = false;
  eval->add_option("--gold", gold_path, "gold CSV: case_id,utt,sent,relation,left,right")
      ->required();
  eval->add_option("--pool", eval_pool, "pool to sample from");
  eval->add_option("--n", eval_n, "sample size");
  eval->add_flag("--macro", macro, "macro-average the overall scores");
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus from a spec");
  std::string spec_path;
  std::string synth_out;
  synth->add_option("--spec", spec_path, "CSV: relation,kappa,count (kappa in A,B,C,D,AC,BD)")
      ->required();
  synth->add_option("--out", synth_out, "output corpus file")->required();
  auto* report = app.add_subcommand("report", "MI table plus SVG chart");
  auto* run = app.add_subcommand("run", "full pipeline: ingest through report");

  try {
    app.parse(argc, argv);
    apply_config_file(opt, handles);

    if (ingest->parsed()) return cmd_ingest(opt);
    if (partition->parsed()) return cmd_partition(opt);
    if (extract->parsed()) return cmd_extract(opt, pool_name);
    if (pmi->parsed()) return cmd_pmi(opt, false);
    if (eval->parsed()) return cmd_eval(opt, gold_path, eval_pool, eval_n, macro);
    if (synth->parsed()) return cmd_synth(opt, spec_path, synth_out);
    if (report->parsed()) return cmd_pmi(opt, true);
    if (run->parsed()) return cmd_run(opt);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const courtrel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.category()) {
      case courtrel::ErrorCategory::Input: return 2;
      case courtrel::ErrorCategory::Pattern: return 3;
      case courtrel::ErrorCategory::Internal: return 4;
    }
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
