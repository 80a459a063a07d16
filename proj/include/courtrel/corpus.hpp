#ifndef COURTREL_CORPUS_HPP
#define COURTREL_CORPUS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "courtrel/tags.hpp"

namespace courtrel {

enum class Side { Petitioner, Respondent };
enum class SpeakerKind { Justice, Lawyer };

std::string_view to_string(Side side);
std::optional<Side> side_from_string(std::string_view name);

struct CaseMeta {
  std::string case_id;
  Side winner = Side::Petitioner;
  std::map<std::string, Side> justice_votes;

  bool operator==(const CaseMeta&) const = default;
};

struct PretaggedToken {
  std::string surface;
  CoarseTag tag = CoarseTag::Noun;

  bool operator==(const PretaggedToken&) const = default;
};

struct Utterance {
  std::string case_id;
  int index = 0;
  std::string speaker_id;
  SpeakerKind kind = SpeakerKind::Justice;
  std::optional<Side> lawyer_side;     // present iff kind == Lawyer
  std::optional<Side> addressee_side;  // present iff kind == Justice
  std::string text;
  std::vector<std::string> sentences;  // filled by sentence_split at load
  // Optional external tags for the whole utterance, aligned with the
  // bundled tokenizer's token stream across all sentences.
  std::optional<std::vector<PretaggedToken>> pretagged;

  bool operator==(const Utterance&) const = default;
};

struct LoadDiagnostics {
  std::size_t cases = 0;
  std::size_t utterances = 0;
  std::size_t sentences = 0;
  // One utterance is counted as one conversational exchange.
  std::size_t exchanges() const { return utterances; }

  bool operator==(const LoadDiagnostics&) const = default;
};

struct Corpus {
  std::map<std::string, CaseMeta> cases;
  std::vector<Utterance> utterances;  // sorted by (case_id, index)
  LoadDiagnostics diagnostics;

  const CaseMeta& case_of(const Utterance& u) const;
  bool operator==(const Corpus& other) const {
    return cases == other.cases && utterances == other.utterances;
  }
};

using ParsedRecord = std::variant<Utterance, CaseMeta>;

// One line of the canonical line-delimited record format (see README).
// line_no is used for error reporting only.
ParsedRecord parse_record(std::string_view line, std::size_t line_no = 1);
std::string serialize_record(const ParsedRecord& record);
std::string serialize_record(const Utterance& u);
std::string serialize_record(const CaseMeta& meta);

// Order-insensitive assembly with full invariant validation.
Corpus assemble_corpus(std::vector<ParsedRecord> records);
Corpus load_corpus(const std::filesystem::path& path);
Corpus load_corpus_text(std::string_view text);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Punctuation-based splitter with an abbreviation guard (Mr. Mrs. Dr. J. v.
// No. U.S. plus single-letter initials). Keeps terminal punctuation; never
// drops non-whitespace characters.
std::vector<std::string> sentence_split(std::string_view text);

}  // namespace courtrel

#endif
