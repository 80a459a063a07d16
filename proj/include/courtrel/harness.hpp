#ifndef COURTREL_HARNESS_HPP
#define COURTREL_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "courtrel/corpus.hpp"
#include "courtrel/grouping.hpp"
#include "courtrel/relext.hpp"
#include "courtrel/stats.hpp"

namespace courtrel {

// Uniform sample without replacement. mt19937_64 + rejection sampling, so the
// result depends only on (pool, n, seed), not on platform or stdlib.
std::vector<UttRef> sample_pool(const std::vector<UttRef>& pool, std::size_t n,
                                std::uint64_t seed);

struct RelationScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t matched = 0;
};

struct EvalReport {
  RelationScore overall;  // micro by default
  std::map<RelationType, RelationScore> per_relation;
  bool macro = false;
};

// Exact (relation, left, right) match within the same
// (case, utterance, sentence). Overall is micro-averaged unless macro is set
// (macro averages per-relation scores over relations with any support).
EvalReport score(const std::vector<RelationInstance>& predicted,
                 const std::vector<RelationInstance>& gold, bool macro = false);

// Gold file rows: case_id,utt,sent,relation,left,right (header optional).
std::vector<RelationInstance> load_gold(const std::filesystem::path& path);

// One spec row. pools has one element (justice utterance, that pool only) or
// two (lawyer utterance double-pooled, {A,C} or {B,D} only).
struct SynthCell {
  RelationType relation = RelationType::IsA;
  std::vector<Kappa> pools;
  std::int64_t count = 0;
};

struct SynthSpec {
  std::vector<SynthCell> cells;

  // CSV rows: relation,kappa,count with kappa in {A,B,C,D,AC,BD}.
  static SynthSpec parse_csv(std::string_view text);
};

struct SynthResult {
  Corpus corpus;
  ContingencyTable expected;  // 7x4, what the full pipeline must count

  SynthResult() : expected(kRelationCount, kKappaCount) {}
};

// Generates a corpus whose pipeline run (partition -> chunk -> extract ->
// count) reproduces `expected` exactly: every generated sentence matches
// exactly one builtin pattern, and speaker/vote/winner metadata land each
// utterance in the requested pool(s).
SynthResult synth_corpus(const SynthSpec& spec, std::uint64_t seed);

}  // namespace courtrel

#endif
