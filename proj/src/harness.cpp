#include "courtrel/harness.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <tuple>

#include "courtrel/errors.hpp"
#include "courtrel/util.hpp"

namespace courtrel {

namespace {

// Unbiased bounded draw from the standards-specified mt19937_64 stream.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % range;
}

}  // namespace

std::vector<UttRef> sample_pool(const std::vector<UttRef>& pool, std::size_t n,
                                std::uint64_t seed) {
  if (n > pool.size()) {
    throw SampleTooLarge("requested sample of " + std::to_string(n) +
                         " from a pool of " + std::to_string(pool.size()));
  }
  std::vector<UttRef> scratch = pool;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded(rng, scratch.size() - i));
    std::swap(scratch[i], scratch[j]);
  }
  scratch.resize(n);
  return scratch;
}

namespace {

using TripleKey = std::tuple<std::string, int, int, RelationType, std::string, std::string>;

TripleKey key_of(const RelationInstance& inst) {
  return {inst.case_id, inst.utterance_index, inst.sentence_index, inst.relation,
          inst.left, inst.right};
}

RelationScore make_score(std::size_t matched, std::size_t predicted, std::size_t gold) {
  RelationScore s;
  s.matched = matched;
  s.predicted = predicted;
  s.gold = gold;
  s.precision = predicted ? static_cast<double>(matched) / static_cast<double>(predicted) : 0.0;
  s.recall = gold ? static_cast<double>(matched) / static_cast<double>(gold) : 0.0;
  // Micro F1 as 2*TP/(P+G); identical to 2PR/(P+R) without the extra rounding.
  s.f1 = (predicted + gold)
             ? 2.0 * static_cast<double>(matched) / static_cast<double>(predicted + gold)
             : 0.0;
  return s;
}

}  // namespace

EvalReport score(const std::vector<RelationInstance>& predicted,
                 const std::vector<RelationInstance>& gold, bool macro) {
  std::set<TripleKey> pred_set;
  for (const auto& p : predicted) pred_set.insert(key_of(p));
  std::set<TripleKey> gold_set;
  for (const auto& g : gold) gold_set.insert(key_of(g));

  EvalReport report;
  report.macro = macro;

  std::size_t matched_total = 0;
  for (RelationType r : kAllRelations) {
    std::size_t p = 0, g = 0, m = 0;
    for (const auto& k : pred_set) {
      if (std::get<3>(k) == r) {
        ++p;
        if (gold_set.count(k)) ++m;
      }
    }
    for (const auto& k : gold_set) {
      if (std::get<3>(k) == r) ++g;
    }
    matched_total += m;
    report.per_relation[r] = make_score(m, p, g);
  }

  if (!macro) {
    report.overall = make_score(matched_total, pred_set.size(), gold_set.size());
  } else {
    RelationScore avg;
    std::size_t supported = 0;
    for (const auto& [r, s] : report.per_relation) {
      if (s.predicted + s.gold == 0) continue;
      ++supported;
      avg.precision += s.precision;
      avg.recall += s.recall;
      avg.f1 += s.f1;
    }
    if (supported) {
      avg.precision /= static_cast<double>(supported);
      avg.recall /= static_cast<double>(supported);
      avg.f1 /= static_cast<double>(supported);
    }
    avg.matched = matched_total;
    avg.predicted = pred_set.size();
    avg.gold = gold_set.size();
    report.overall = avg;
  }
  return report;
}

std::vector<RelationInstance> load_gold(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  std::string_view text = content;
  std::vector<RelationInstance> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++line_no;
    auto stripped = trim(line);
    if (!stripped.empty() && stripped[0] != '#') {
      auto fields = csv_parse_line(stripped);
      if (!(fields.size() == 6 && fields[0] == "case_id")) {  // skip header
        if (fields.size() != 6) {
          throw InputError("gold file " + path.string() + ":" + std::to_string(line_no) +
                           ": expected case_id,utt,sent,relation,left,right");
        }
        RelationInstance inst;
        inst.case_id = fields[0];
        try {
          inst.utterance_index = std::stoi(fields[1]);
          inst.sentence_index = std::stoi(fields[2]);
        } catch (const std::exception&) {
          throw InputError("gold file " + path.string() + ":" + std::to_string(line_no) +
                           ": bad index");
        }
        auto rel = relation_from_string(fields[3]);
        if (!rel) {
          throw InputError("gold file " + path.string() + ":" + std::to_string(line_no) +
                           ": unknown relation \"" + fields[3] + "\"");
        }
        inst.relation = *rel;
        inst.left = fields[4];
        inst.right = fields[5];
        out.push_back(std::move(inst));
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

SynthSpec SynthSpec::parse_csv(std::string_view text) {
  SynthSpec spec;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++line_no;
    auto stripped = trim(line);
    if (!stripped.empty() && stripped[0] != '#') {
      auto fields = csv_parse_line(stripped);
      if (!(fields.size() == 3 && fields[0] == "relation")) {  // skip header
        if (fields.size() != 3) {
          throw InfeasibleSpec("spec line " + std::to_string(line_no) +
                               ": expected relation,kappa,count");
        }
        SynthCell cell;
        auto rel = relation_from_string(trim(fields[0]));
        if (!rel) {
          throw InfeasibleSpec("spec line " + std::to_string(line_no) +
                               ": unknown relation \"" + fields[0] + "\"");
        }
        cell.relation = *rel;
        std::string kappa_text(trim(fields[1]));
        for (char c : kappa_text) {
          auto k = kappa_from_char(c);
          if (!k) {
            throw InfeasibleSpec("spec line " + std::to_string(line_no) +
                                 ": unknown pool \"" + kappa_text + "\"");
          }
          cell.pools.push_back(*k);
        }
        std::sort(cell.pools.begin(), cell.pools.end());
        if (cell.pools.size() == 2) {
          bool ac = cell.pools[0] == Kappa::A && cell.pools[1] == Kappa::C;
          bool bd = cell.pools[0] == Kappa::B && cell.pools[1] == Kappa::D;
          if (!ac && !bd) {
            throw InfeasibleSpec(
                "spec line " + std::to_string(line_no) + ": pool pair \"" + kappa_text +
                "\" is not reachable by any role (lawyer utterances land in AC or BD)");
          }
        } else if (cell.pools.size() != 1) {
          throw InfeasibleSpec("spec line " + std::to_string(line_no) +
                               ": pool must be one of A,B,C,D,AC,BD");
        }
        try {
          cell.count = std::stoll(std::string(trim(fields[2])));
        } catch (const std::exception&) {
          throw InfeasibleSpec("spec line " + std::to_string(line_no) + ": bad count");
        }
        if (cell.count < 0) {
          throw InfeasibleSpec("spec line " + std::to_string(line_no) +
                               ": count must be non-negative");
        }
        spec.cells.push_back(std::move(cell));
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return spec;
}

namespace {

// Single-token concepts that the rule tagger resolves to NOUN (no lexicon or
// suffix interference), so every template sentence chunks predictably.
const std::vector<std::string>& synth_nouns() {
  static const std::vector<std::string> nouns = {
      "statute", "remedy",   "clause",  "petition", "doctrine", "precedent",
      "verdict", "warrant",  "docket",  "subpoena", "charter",  "decree",
      "exhibit", "contract", "permit",  "bylaw",    "mandate",  "ordinance",
      "easement", "plea",    "lien",    "escrow",   "affidavit", "summons",
      "clerk",   "bailiff",  "juror",   "tenant",   "vendor",   "broker",
      "lease",   "patent",   "quota",   "tariff",   "levy",     "audit",
      "budget",  "census"};
  return nouns;
}

std::string template_sentence(RelationType relation, const std::string& left,
                              const std::string& right) {
  switch (relation) {
    case RelationType::IsA:
      return "The " + left + " is a " + right + ".";
    case RelationType::PartOf:
      return "The " + left + " of the " + right + " was cited.";
    case RelationType::UsedBy:
      return "The " + left + " proposed by the " + right + " was affirmed.";
    case RelationType::UsedFor:
      return "The " + left + " for the " + right + " was granted.";
    case RelationType::UsedIn:
      return "The " + left + " used in the " + right + " was affirmed.";
    case RelationType::UsedOver:
      return "The " + left + " over the " + right + " was reversed.";
    case RelationType::UsedWith:
      return "The " + left + " with the " + right + " was drafted.";
  }
  throw InternalError("invalid relation");
}

}  // namespace

SynthResult synth_corpus(const SynthSpec& spec, std::uint64_t seed) {
  SynthResult result;
  std::mt19937_64 rng(seed);

  // Two lawsuits cover every reachable pool combination: in "w" (petitioner
  // wins) the petitioner side is the winner, in "l" (respondent wins) it is
  // the loser. JS votes petitioner, JU votes respondent; both speak to the
  // petitioner's lawyer, so JS is supportive and JU unsupported.
  const std::string win_case = "synth-w";
  const std::string lose_case = "synth-l";
  std::map<std::string, std::vector<Utterance>> per_case;

  auto pick_pair = [&] {
    const auto& nouns = synth_nouns();
    std::size_t a = static_cast<std::size_t>(bounded(rng, nouns.size()));
    std::size_t b = static_cast<std::size_t>(bounded(rng, nouns.size() - 1));
    if (b >= a) ++b;
    return std::make_pair(nouns[a], nouns[b]);
  };

  auto add_utterance = [&](const std::string& case_id, SpeakerKind kind,
                           const std::string& speaker, std::optional<Side> addr,
                           std::optional<Side> side, RelationType relation) {
    auto [left, right] = pick_pair();
    Utterance u;
    u.case_id = case_id;
    u.index = static_cast<int>(per_case[case_id].size());
    u.speaker_id = speaker;
    u.kind = kind;
    u.addressee_side = addr;
    u.lawyer_side = side;
    u.text = template_sentence(relation, left, right);
    per_case[case_id].push_back(std::move(u));
  };

  for (const auto& cell : spec.cells) {
    for (std::int64_t i = 0; i < cell.count; ++i) {
      if (cell.pools.size() == 1) {
        switch (cell.pools.front()) {
          case Kappa::A:
            add_utterance(win_case, SpeakerKind::Justice, "JS", Side::Petitioner,
                          std::nullopt, cell.relation);
            break;
          case Kappa::B:
            add_utterance(lose_case, SpeakerKind::Justice, "JS", Side::Petitioner,
                          std::nullopt, cell.relation);
            break;
          case Kappa::C:
            add_utterance(win_case, SpeakerKind::Justice, "JU", Side::Petitioner,
                          std::nullopt, cell.relation);
            break;
          case Kappa::D:
            add_utterance(lose_case, SpeakerKind::Justice, "JU", Side::Petitioner,
                          std::nullopt, cell.relation);
            break;
        }
      } else if (cell.pools[0] == Kappa::A) {  // {A, C}: winning-side lawyer
        add_utterance(win_case, SpeakerKind::Lawyer, "LP", std::nullopt,
                      Side::Petitioner, cell.relation);
      } else {  // {B, D}: losing-side lawyer
        add_utterance(win_case, SpeakerKind::Lawyer, "LR", std::nullopt,
                      Side::Respondent, cell.relation);
      }
      for (Kappa k : cell.pools) {
        result.expected.add(static_cast<std::size_t>(cell.relation),
                            static_cast<std::size_t>(k));
      }
    }
  }

  std::vector<ParsedRecord> records;
  for (const auto& [case_id, utterances] : per_case) {
    CaseMeta meta;
    meta.case_id = case_id;
    meta.winner = case_id == win_case ? Side::Petitioner : Side::Respondent;
    meta.justice_votes = {{"JS", Side::Petitioner}, {"JU", Side::Respondent}};
    records.emplace_back(std::move(meta));
    for (const auto& u : utterances) records.emplace_back(u);
  }
  result.corpus = assemble_corpus(std::move(records));
  return result;
}

}  // namespace courtrel
