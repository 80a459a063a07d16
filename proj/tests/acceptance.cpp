// Acceptance suite: one pass/fail line per criterion. Returns nonzero if any
// required criterion fails. argv[1] is the courtrel CLI binary (used by the
// determinism criterion); argv[2] overrides the scratch directory.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "courtrel/chunker.hpp"
#include "courtrel/corpus.hpp"
#include "courtrel/errors.hpp"
#include "courtrel/grouping.hpp"
#include "courtrel/harness.hpp"
#include "courtrel/pipeline.hpp"
#include "courtrel/relext.hpp"
#include "courtrel/stats.hpp"
#include "courtrel/util.hpp"
#include "golden.hpp"

namespace fs = std::filesystem;
using namespace courtrel;
using courtrel::testing::golden_corpus;
using courtrel::testing::golden_sentences;
using courtrel::testing::golden_triples;
using courtrel::testing::GoldenTriple;

namespace {

struct Failure {
  std::string detail;
};

void expect(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

class Runner {
 public:
  void criterion(const std::string& name, double limit_seconds,
                 const std::function<std::string()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.detail;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && limit_seconds > 0 && elapsed > limit_seconds) {
      ok = false;
      detail = "exceeded time limit of " + format_double(limit_seconds) + "s";
    }
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << format_double(elapsed)
         << "s)";
    if (!detail.empty()) line << "  " << detail;
    std::cout << line.str() << "\n";
    if (!ok) ++failures_;
  }

  void skip(const std::string& name, const std::string& why) {
    std::cout << "SKIP  " << name << "  " << why << "\n";
  }

  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

// ---- criterion bodies -----------------------------------------------------

std::string golden_extraction() {
  Corpus corpus = golden_corpus();
  Partition partition = make_partition(corpus);
  auto instances = extract_corpus(corpus, partition, std::nullopt,
                                  PatternPack::builtin(), RuleTagger());
  std::set<GoldenTriple> got;
  for (const auto& inst : instances) got.insert({inst.relation, inst.left, inst.right});
  std::set<GoldenTriple> expected(golden_triples().begin(), golden_triples().end());
  for (const auto& t : expected) {
    expect(got.count(t) == 1, "missing " + std::string(to_string(std::get<0>(t))) + "(" +
                                  std::get<1>(t) + ", " + std::get<2>(t) + ")");
  }
  for (const auto& t : got) {
    expect(expected.count(t) == 1, "spurious " + std::string(to_string(std::get<0>(t))) +
                                       "(" + std::get<1>(t) + ", " + std::get<2>(t) + ")");
  }
  expect(instances.size() == expected.size(), "instance multiset differs");
  return std::to_string(got.size()) + " instances, zero spurious";
}

Utterance mk_utt(const std::string& case_id, int idx, SpeakerKind kind,
                 const std::string& speaker, Side side) {
  Utterance u;
  u.case_id = case_id;
  u.index = idx;
  u.speaker_id = speaker;
  u.kind = kind;
  if (kind == SpeakerKind::Justice) u.addressee_side = side;
  else u.lawyer_side = side;
  u.text = "Placeholder.";
  return u;
}

std::string grouping_oracle() {
  // Two lawsuits (petitioner-won, respondent-won), six utterances each,
  // covering all six roles under both outcomes.
  std::vector<ParsedRecord> records;
  for (Side winner : {Side::Petitioner, Side::Respondent}) {
    CaseMeta meta;
    meta.case_id = winner == Side::Petitioner ? "won-pe" : "won-re";
    meta.winner = winner;
    meta.justice_votes = {{"JP", Side::Petitioner}, {"JR", Side::Respondent}};
    records.emplace_back(meta);
    int idx = 0;
    records.emplace_back(mk_utt(meta.case_id, idx++, SpeakerKind::Justice, "JP",
                                Side::Petitioner));  // role 1
    records.emplace_back(mk_utt(meta.case_id, idx++, SpeakerKind::Justice, "JP",
                                Side::Respondent));  // role 2
    records.emplace_back(mk_utt(meta.case_id, idx++, SpeakerKind::Justice, "JR",
                                Side::Petitioner));  // role 3
    records.emplace_back(mk_utt(meta.case_id, idx++, SpeakerKind::Justice, "JR",
                                Side::Respondent));  // role 4
    records.emplace_back(mk_utt(meta.case_id, idx++, SpeakerKind::Lawyer, "LP",
                                Side::Petitioner));  // role 5
    records.emplace_back(mk_utt(meta.case_id, idx++, SpeakerKind::Lawyer, "LR",
                                Side::Respondent));  // role 6
  }
  Corpus corpus = assemble_corpus(std::move(records));
  expect(corpus.utterances.size() == 12, "expected a 12-utterance corpus");
  Partition partition = make_partition(corpus);

  // Brute-force enumeration: cooperation groups, then winner crossing.
  const std::map<std::string, std::pair<std::set<int>, bool>> groups = {
      {"I.i", {{1, 5}, true}},
      {"I.ii", {{3, 5}, false}},
      {"II.i", {{2, 6}, false}},
      {"II.ii", {{4, 6}, true}},
  };
  const std::map<std::pair<std::string, Side>, Kappa> pool_of = {
      {{"I.i", Side::Petitioner}, Kappa::A},  {{"II.ii", Side::Respondent}, Kappa::A},
      {{"I.i", Side::Respondent}, Kappa::B},  {{"II.ii", Side::Petitioner}, Kappa::B},
      {{"I.ii", Side::Petitioner}, Kappa::C}, {{"II.i", Side::Respondent}, Kappa::C},
      {{"I.ii", Side::Respondent}, Kappa::D}, {{"II.i", Side::Petitioner}, Kappa::D},
  };
  std::map<Kappa, std::set<UttRef>> expected;
  for (const auto& u : corpus.utterances) {
    const CaseMeta& meta = corpus.cases.at(u.case_id);
    int role;
    if (u.kind == SpeakerKind::Lawyer) {
      role = u.lawyer_side == Side::Petitioner ? 5 : 6;
    } else {
      bool vp = meta.justice_votes.at(u.speaker_id) == Side::Petitioner;
      bool sp = u.addressee_side == Side::Petitioner;
      role = vp ? (sp ? 1 : 2) : (sp ? 3 : 4);
    }
    for (const auto& [gname, group] : groups) {
      if (group.first.count(role)) {
        expected[pool_of.at({gname, meta.winner})].insert({u.case_id, u.index});
      }
    }
  }
  for (Kappa k : kAllKappas) {
    std::set<UttRef> got(partition.pool(k).begin(), partition.pool(k).end());
    expect(got == expected[k],
           std::string("pool ") + to_char(k) + " differs from the brute-force result");
  }
  // Justice utterances single-pooled, lawyer utterances double-pooled with one
  // supportive and one unsupported pool sharing the outcome.
  std::map<UttRef, std::vector<Kappa>> membership;
  for (Kappa k : kAllKappas) {
    for (const auto& ref : partition.pool(k)) membership[ref].push_back(k);
  }
  for (const auto& u : corpus.utterances) {
    const auto& pools = membership.at({u.case_id, u.index});
    if (u.kind == SpeakerKind::Justice) {
      expect(pools.size() == 1, "justice utterance in more than one pool");
    } else {
      expect(pools.size() == 2, "lawyer utterance not double-pooled");
      expect(traits_of(pools[0]).supportive != traits_of(pools[1]).supportive,
             "lawyer pools must split supportive/unsupported");
      expect(traits_of(pools[0]).win == traits_of(pools[1]).win,
             "lawyer pools must share the outcome");
    }
  }
  return "12 utterances match the enumeration in all four pools";
}

std::string pmi_identities() {
  // Exact independence: f = a_r * b_c.
  const std::int64_t a[7] = {1, 2, 3, 4, 5, 6, 7};
  const std::int64_t b[4] = {3, 1, 4, 2};
  ContingencyTable independent(kRelationCount, kKappaCount);
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 4; ++c) independent.add(r, c, a[r] * b[c]);
  }
  PmiMatrix m = pmi_matrix(independent);
  for (const auto& row : m.values) {
    for (double v : row) {
      expect(std::abs(v) <= 1e-12, "independence cell off zero by " + format_double(v));
    }
  }

  // Scale invariance on a fixed arbitrary table.
  std::mt19937_64 rng(424242);
  ContingencyTable base(kRelationCount, kKappaCount);
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 4; ++c) base.add(r, c, rng() % 9);
  }
  base.add(0, 0, 1);
  PmiMatrix base_mi = pmi_matrix(base);
  for (std::int64_t scale : {2, 7, 100}) {
    ContingencyTable scaled(kRelationCount, kKappaCount);
    for (std::size_t r = 0; r < 7; ++r) {
      for (std::size_t c = 0; c < 4; ++c) scaled.add(r, c, base.at(r, c) * scale);
    }
    PmiMatrix scaled_mi = pmi_matrix(scaled);
    for (std::size_t r = 0; r < 7; ++r) {
      for (std::size_t c = 0; c < 4; ++c) {
        double x = base_mi.values[r][c];
        double y = scaled_mi.values[r][c];
        if (std::isinf(x)) {
          expect(std::isinf(y), "zero cell changed class under scaling");
        } else {
          expect(std::abs(x - y) <= 1e-12,
                 "finite MI moved by " + format_double(std::abs(x - y)) + " at scale " +
                     std::to_string(scale));
        }
      }
    }
  }

  // Hand case.
  ContingencyTable hand(2, 2);
  hand.add(0, 0, 2);
  hand.add(0, 1, 1);
  hand.add(1, 0, 1);
  hand.add(1, 1, 2);
  double got = pmi(hand, 0, 0);
  expect(std::abs(got - std::log(4.0 / 3.0)) <= 1e-12,
         "f=[[2,1],[1,2]] gave " + format_double(got));
  return "independence, scaling {2,7,100}, and ln(4/3) all within 1e-12";
}

std::string synthetic_oracle() {
  std::mt19937_64 rng(987654321);
  int checked_cells = 0;
  for (int iter = 0; iter < 25; ++iter) {
    SynthSpec spec;
    for (RelationType r : kAllRelations) {
      for (Kappa k : kAllKappas) {
        if (rng() % 3 == 0) {
          spec.cells.push_back({r, {k}, static_cast<std::int64_t>(rng() % 6)});
        }
      }
      if (rng() % 3 == 0) {
        spec.cells.push_back({r, {Kappa::A, Kappa::C}, static_cast<std::int64_t>(rng() % 4)});
      }
      if (rng() % 3 == 0) {
        spec.cells.push_back({r, {Kappa::B, Kappa::D}, static_cast<std::int64_t>(rng() % 4)});
      }
    }
    SynthResult synth = synth_corpus(spec, rng());
    Partition partition = make_partition(synth.corpus);
    ContingencyTable counted = pool_contingency(synth.corpus, partition,
                                                PatternPack::builtin(), RuleTagger(),
                                                iter % 2 ? 4 : 1);
    expect(counted == synth.expected,
           "spec " + std::to_string(iter) + ": pipeline table differs from the spec table");

    // Sign oracle: integer cross-product decides the sign of every MI cell.
    if (counted.grand_total() > 0) {
      PmiMatrix m = pmi_matrix(counted);
      std::int64_t n = counted.grand_total();
      for (std::size_t r = 0; r < counted.rows(); ++r) {
        for (std::size_t c = 0; c < counted.cols(); ++c) {
          double v = m.values[r][c];
          std::int64_t lhs = counted.at(r, c) * n;
          std::int64_t rhs = counted.row_total(r) * counted.col_total(c);
          ++checked_cells;
          if (counted.at(r, c) == 0) {
            expect(std::isinf(v) && v < 0, "zero cell not -inf");
          } else if (lhs > rhs) {
            expect(v > 0, "expected positive MI");
          } else if (lhs < rhs) {
            expect(v < 0, "expected negative MI");
          } else {
            expect(std::abs(v) <= 1e-12, "expected zero MI");
          }
        }
      }
    }
  }
  return "25 specs: exact tables, " + std::to_string(checked_cells) +
         " sign cells match the integer oracle";
}

RelationInstance mk_inst(const std::string& c, int u, RelationType r,
                         const std::string& left, const std::string& right) {
  RelationInstance inst;
  inst.case_id = c;
  inst.utterance_index = u;
  inst.sentence_index = 0;
  inst.relation = r;
  inst.left = left;
  inst.right = right;
  return inst;
}

std::string evaluation_arithmetic() {
  std::vector<RelationInstance> gold = {
      mk_inst("c", 0, RelationType::IsA, "a", "b"),
      mk_inst("c", 1, RelationType::IsA, "c", "d"),
      mk_inst("c", 2, RelationType::UsedBy, "e", "f"),
      mk_inst("c", 3, RelationType::UsedFor, "g", "h"),
  };
  std::vector<RelationInstance> predicted = {gold[0], gold[1],
                                             mk_inst("c", 2, RelationType::UsedBy, "e", "x")};
  EvalReport r = score(predicted, gold);
  expect(r.overall.precision == 2.0 / 3.0, "P != 2/3: " + format_double(r.overall.precision));
  expect(r.overall.recall == 1.0 / 2.0, "R != 1/2: " + format_double(r.overall.recall));
  expect(r.overall.f1 == 4.0 / 7.0, "F1 != 4/7: " + format_double(r.overall.f1));

  EvalReport identity = score(gold, gold);
  expect(identity.overall.precision == 1.0 && identity.overall.recall == 1.0 &&
             identity.overall.f1 == 1.0,
         "identity case not all 1.0");

  std::vector<RelationInstance> disjoint = {mk_inst("c", 9, RelationType::IsA, "q", "z")};
  EvalReport zero = score(disjoint, gold);
  expect(zero.overall.precision == 0.0 && zero.overall.recall == 0.0 &&
             zero.overall.f1 == 0.0,
         "disjoint case not all 0.0");
  return "P=2/3 R=1/2 F1=4/7 exact; identity 1.0; disjoint 0.0";
}

std::map<std::string, std::string> read_dir(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), root).generic_string()] = read_file(entry.path());
    }
  }
  return out;
}

std::string determinism(const std::string& cli, const fs::path& scratch) {
  fs::path corpus_path = scratch / "golden.jsonl";
  save_corpus(golden_corpus(), corpus_path);

  // Identical config means the same output directory too; each run rewrites
  // it and the bundle is captured in memory for comparison.
  fs::path out_dir = scratch / "det-out";
  auto run_once = [&](int threads) {
    fs::remove_all(out_dir);
    std::string cmd = "\"" + cli + "\" run --corpus \"" + corpus_path.string() +
                      "\" --out \"" + out_dir.string() + "\" --threads " +
                      std::to_string(threads) + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    expect(rc == 0, "CLI run exited with " + std::to_string(rc));
    return read_dir(out_dir);
  };

  auto a1 = run_once(1);
  auto a2 = run_once(1);
  expect(a1 == a2, "two single-threaded runs differ");
  auto b1 = run_once(8);
  auto b2 = run_once(8);
  expect(b1 == b2, "two --threads 8 runs differ");
  expect(a1 == b1, "--threads 8 bundle differs from single-threaded bundle");
  expect(a1.count("report/mi.csv") == 1 && a1.count("manifest.csv") == 1,
         "bundle is missing expected files");
  return std::to_string(a1.size()) + " files byte-identical across runs and thread counts";
}

std::string external_corpus(const std::string& path) {
  Corpus corpus = load_corpus(path);
  expect(corpus.diagnostics.utterances == 50389,
         "expected 50,389 utterances, got " +
             std::to_string(corpus.diagnostics.utterances));
  Partition partition = make_partition(corpus);
  const std::size_t expected_sizes[4] = {21105, 15116, 15489, 24461};
  for (Kappa k : kAllKappas) {
    std::size_t got = partition.diagnostics[static_cast<int>(k)].utterances;
    expect(got == expected_sizes[static_cast<int>(k)],
           std::string("pool ") + to_char(k) + " expected " +
               std::to_string(expected_sizes[static_cast<int>(k)]) + ", got " +
               std::to_string(got));
  }
  ContingencyTable table =
      pool_contingency(corpus, partition, PatternPack::builtin(), RuleTagger(), 4);
  PmiMatrix m = pmi_matrix(table);
  // Qualitative shape: IsA/PartOf/UsedBy nearly flat (range <= 0.2 nats),
  // and pool C strictly positive for all seven relations.
  for (std::size_t r = 0; r < 3; ++r) {
    double lo = m.values[r][0], hi = m.values[r][0];
    for (double v : m.values[r]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    expect(std::isfinite(lo) && hi - lo <= 0.2,
           std::string(to_string(static_cast<RelationType>(r))) + " not flat: range " +
               format_double(hi - lo));
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    expect(m.values[r][static_cast<int>(Kappa::C)] > 0,
           std::string(to_string(static_cast<RelationType>(r))) + " MI(R,C) not positive");
  }
  return "pool sizes exact; MI(R,C) > 0 for all relations";
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::path("acceptance-scratch");
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  Runner runner;
  runner.criterion("golden-extraction", 1.0, golden_extraction);
  runner.criterion("grouping-oracle", 1.0, grouping_oracle);
  runner.criterion("pmi-identities", 0.0, pmi_identities);
  runner.criterion("synthetic-e2e-oracle", 30.0, synthetic_oracle);
  runner.criterion("evaluation-arithmetic", 0.0, evaluation_arithmetic);
  runner.criterion("determinism", 0.0, [&]() -> std::string {
    if (cli.empty()) {
      throw Failure{"no CLI path given (pass the courtrel binary as argv[1])"};
    }
    return determinism(cli, scratch);
  });

  const char* external = std::getenv("COURTREL_SCOTUS_CORPUS");
  if (external && *external) {
    runner.criterion("external-corpus", 0.0,
                     [&] { return external_corpus(external); });
  } else {
    runner.skip("external-corpus",
                "optional: set COURTREL_SCOTUS_CORPUS to the user-supplied corpus file");
  }

  if (runner.failures()) {
    std::cout << runner.failures() << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
