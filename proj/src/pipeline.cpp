#include "courtrel/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>

#include <json.hpp>

#include "courtrel/builtin_data.hpp"
#include "courtrel/chunker.hpp"
#include "courtrel/errors.hpp"
#include "courtrel/report.hpp"
#include "courtrel/util.hpp"

namespace courtrel {

std::string PipelineConfig::to_json() const {
  nlohmann::json j;
  j["corpus"] = corpus_path.string();
  j["patterns"] = pattern_path.empty() ? "<builtin>" : pattern_path.string();
  j["lexicon"] = lexicon_path.empty() ? "<builtin>" : lexicon_path.string();
  j["smoothing"] = smoothing;
  j["log_base"] = log_base == LogBase::Natural ? "e" : "2";
  j["seed"] = seed;
  j["output_dir"] = output_dir.string();
  return j.dump(2) + "\n";
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

void OutputDir::write(const std::filesystem::path& relative, std::string_view content) {
  write_file(root_ / relative, content);
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(fnv1a64(content)));
  entries_.emplace_back(relative.generic_string(),
                        std::to_string(content.size()) + "," + digest);
}

void OutputDir::finalize(const PipelineConfig& config) {
  write("config.json", config.to_json());
  std::sort(entries_.begin(), entries_.end());
  std::string manifest = "path,bytes,fnv1a64\n";
  for (const auto& [path, info] : entries_) {
    manifest += csv_escape(path) + "," + info + "\n";
  }
  write_file(root_ / "manifest.csv", manifest);
}

namespace {

std::string diagnostics_csv(const LoadDiagnostics& d, std::size_t excluded) {
  std::string out = "metric,value\n";
  out += csv_row({"cases", std::to_string(d.cases)});
  out += csv_row({"utterances", std::to_string(d.utterances)});
  // One utterance counts as one conversational exchange.
  out += csv_row({"exchanges", std::to_string(d.exchanges())});
  out += csv_row({"sentences", std::to_string(d.sentences)});
  out += csv_row({"excluded_from_pools", std::to_string(excluded)});
  return out;
}

std::string partition_csv(const Partition& partition) {
  std::string out = "pool,case_id,utterance_index\n";
  for (Kappa k : kAllKappas) {
    for (const auto& ref : partition.pool(k)) {
      out += csv_row({std::string(1, to_char(k)), ref.case_id, std::to_string(ref.index)});
    }
  }
  return out;
}

std::string partition_diagnostics_csv(const Partition& partition) {
  std::string out = "pool,utterances,lawsuits\n";
  for (Kappa k : kAllKappas) {
    const auto& d = partition.diagnostics[static_cast<int>(k)];
    out += csv_row({std::string(1, to_char(k)), std::to_string(d.utterances),
                    std::to_string(d.lawsuits)});
  }
  return out;
}

std::string instance_csv_row(const RelationInstance& inst) {
  return csv_row({std::string(to_string(inst.relation)), inst.left, inst.right,
                  inst.case_id, std::to_string(inst.utterance_index),
                  std::to_string(inst.sentence_index), inst.pattern_id});
}

}  // namespace

ContingencyTable pool_contingency(const Corpus& corpus, const Partition& partition,
                                  const PatternPack& pack, const Tagger& tagger,
                                  int threads) {
  std::map<UttRef, std::vector<Kappa>> pools_of;
  for (Kappa k : kAllKappas) {
    for (const auto& ref : partition.pool(k)) pools_of[ref].push_back(k);
  }
  std::vector<UttRef> all_refs;
  all_refs.reserve(corpus.utterances.size());
  for (const auto& u : corpus.utterances) all_refs.push_back({u.case_id, u.index});

  ContingencyTable table(kRelationCount, kKappaCount);
  extract_stream(corpus, all_refs, pack, tagger, threads,
                 [&](const RelationInstance& inst) {
                   auto it = pools_of.find({inst.case_id, inst.utterance_index});
                   if (it == pools_of.end()) return;
                   for (Kappa k : it->second) {
                     table.add(static_cast<std::size_t>(inst.relation),
                               static_cast<std::size_t>(k));
                   }
                 });
  return table;
}

RunSummary run_pipeline(const PipelineConfig& config) {
  Corpus corpus = load_corpus(config.corpus_path);

  Lexicon user_lexicon;
  const Lexicon* lexicon = &Lexicon::builtin();
  if (!config.lexicon_path.empty()) {
    user_lexicon.load_tsv(builtin::closed_lexicon_text(), true, "<builtin closed>");
    user_lexicon.load_tsv(builtin::content_lexicon_text(), false, "<builtin content>");
    user_lexicon.load_tsv_file(config.lexicon_path, false);
    lexicon = &user_lexicon;
  }
  RuleTagger tagger(*lexicon);

  const PatternPack user_pack =
      config.pattern_path.empty() ? PatternPack{} : load_patterns(config.pattern_path);
  const PatternPack& pack =
      config.pattern_path.empty() ? PatternPack::builtin() : user_pack;

  Partition partition = make_partition(corpus);

  OutputDir out(config.output_dir);
  out.write("ingest_diagnostics.csv", diagnostics_csv(corpus.diagnostics, partition.excluded));
  out.write("partition.csv", partition_csv(partition));
  out.write("partition_diagnostics.csv", partition_diagnostics_csv(partition));

  // Pool labels per utterance, for the contingency counts.
  std::map<UttRef, std::vector<Kappa>> pools_of;
  for (Kappa k : kAllKappas) {
    for (const auto& ref : partition.pool(k)) pools_of[ref].push_back(k);
  }

  std::vector<UttRef> all_refs;
  all_refs.reserve(corpus.utterances.size());
  for (const auto& u : corpus.utterances) all_refs.push_back({u.case_id, u.index});

  std::string extraction = "relation,left,right,case_id,utt,sent,pattern_id\n";
  ContingencyTable table(kRelationCount, kKappaCount);
  std::size_t instances = 0;
  extract_stream(corpus, all_refs, pack, tagger, config.threads,
                 [&](const RelationInstance& inst) {
                   extraction += instance_csv_row(inst);
                   ++instances;
                   auto it = pools_of.find({inst.case_id, inst.utterance_index});
                   if (it != pools_of.end()) {
                     for (Kappa k : it->second) {
                       table.add(static_cast<std::size_t>(inst.relation),
                                 static_cast<std::size_t>(k));
                     }
                   }
                 });
  out.write("extraction.csv", extraction);

  if (table.grand_total() > 0) {
    PmiMatrix matrix = pmi_matrix(table, config.smoothing, config.log_base);
    out.write("report/mi.csv", mi_csv(table, matrix));
    out.write("report/marginals.csv", marginals_csv(table));
    out.write("report/mi.svg", render_mi_chart(matrix));
  } else {
    std::cerr << "warning: no relation instances in any pool; reports are empty\n";
    out.write("report/mi.csv", "relation,kappa,count,mi\n");
    out.write("report/marginals.csv", marginals_csv(table));
    out.write("report/mi.svg",
              "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"440\">"
              "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>"
              "<text x=\"24\" y=\"32\" font-family=\"sans-serif\" font-size=\"14\" "
              "fill=\"#222\">no relation instances extracted</text></svg>\n");
  }
  out.finalize(config);

  RunSummary summary;
  summary.load = corpus.diagnostics;
  summary.pools = partition.diagnostics;
  summary.instances = instances;
  return summary;
}

}  // namespace courtrel
