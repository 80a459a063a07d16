#ifndef COURTREL_PIPELINE_HPP
#define COURTREL_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "courtrel/corpus.hpp"
#include "courtrel/grouping.hpp"
#include "courtrel/relext.hpp"
#include "courtrel/stats.hpp"

namespace courtrel {

struct PipelineConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path pattern_path;  // empty -> builtin pack
  std::filesystem::path lexicon_path;  // empty -> builtin lexicon
  double smoothing = 0.0;
  LogBase log_base = LogBase::Natural;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  int threads = 1;

  std::string to_json() const;
};

struct RunSummary {
  LoadDiagnostics load;
  std::array<PoolDiagnostics, kKappaCount> pools;
  std::size_t instances = 0;  // rows in extraction.csv
};

// load -> partition -> chunk -> extract -> count -> pmi -> report.
// Writes ingest_diagnostics.csv, partition.csv, partition_diagnostics.csv,
// extraction.csv, report/mi.csv, report/marginals.csv, report/mi.svg,
// config.json and manifest.csv under config.output_dir.
RunSummary run_pipeline(const PipelineConfig& config);

// Extracts every utterance once and counts each instance into every pool its
// utterance belongs to (lawyer utterances therefore count twice).
ContingencyTable pool_contingency(const Corpus& corpus, const Partition& partition,
                                  const PatternPack& pack, const Tagger& tagger,
                                  int threads = 1);

// Writes config.json plus manifest.csv (path,bytes,fnv1a64) covering every
// file previously written into the directory by write_output.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);
  void write(const std::filesystem::path& relative, std::string_view content);
  void finalize(const PipelineConfig& config);
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::vector<std::pair<std::string, std::string>> entries_;  // rel path, content digest info
};

}  // namespace courtrel

#endif
