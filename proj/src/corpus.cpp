#include "courtrel/corpus.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <json.hpp>

#include "courtrel/errors.hpp"
#include "courtrel/util.hpp"

namespace courtrel {

using nlohmann::json;

std::string_view to_string(Side side) {
  return side == Side::Petitioner ? "petitioner" : "respondent";
}

std::optional<Side> side_from_string(std::string_view name) {
  if (name == "petitioner") return Side::Petitioner;
  if (name == "respondent") return Side::Respondent;
  return std::nullopt;
}

const CaseMeta& Corpus::case_of(const Utterance& u) const {
  auto it = cases.find(u.case_id);
  if (it == cases.end()) throw DanglingCase(u.case_id);
  return it->second;
}

namespace {

std::string require_string(const json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw MalformedRecord(line_no, std::string("missing or non-string \"") + key + "\"");
  }
  return it->get<std::string>();
}

Side require_side(const json& j, const char* key, std::size_t line_no) {
  auto side = side_from_string(require_string(j, key, line_no));
  if (!side) {
    throw MalformedRecord(line_no, std::string("\"") + key +
                                       "\" must be petitioner or respondent");
  }
  return *side;
}

CaseMeta parse_case(const json& j, std::size_t line_no) {
  CaseMeta meta;
  meta.case_id = require_string(j, "case", line_no);
  meta.winner = require_side(j, "winner", line_no);
  auto votes = j.find("votes");
  if (votes == j.end() || !votes->is_object()) {
    throw MalformedRecord(line_no, "missing or non-object \"votes\"");
  }
  for (auto it = votes->begin(); it != votes->end(); ++it) {
    if (!it.value().is_string()) {
      throw MalformedRecord(line_no, "vote for \"" + it.key() + "\" is not a string");
    }
    auto side = side_from_string(it.value().get<std::string>());
    if (!side) {
      throw MalformedRecord(line_no, "vote for \"" + it.key() +
                                         "\" must be petitioner or respondent");
    }
    meta.justice_votes[it.key()] = *side;
  }
  return meta;
}

Utterance parse_utterance(const json& j, std::size_t line_no) {
  Utterance u;
  u.case_id = require_string(j, "case", line_no);
  auto idx = j.find("idx");
  if (idx == j.end() || !idx->is_number_integer()) {
    throw MalformedRecord(line_no, "missing or non-integer \"idx\"");
  }
  auto idx_value = idx->get<std::int64_t>();
  if (idx_value < 0) throw MalformedRecord(line_no, "\"idx\" must be non-negative");
  u.index = static_cast<int>(idx_value);
  u.speaker_id = require_string(j, "speaker", line_no);
  std::string sk = require_string(j, "sk", line_no);
  if (sk == "justice") {
    u.kind = SpeakerKind::Justice;
  } else if (sk == "lawyer") {
    u.kind = SpeakerKind::Lawyer;
  } else {
    throw MalformedRecord(line_no, "\"sk\" must be justice or lawyer");
  }
  u.text = require_string(j, "text", line_no);

  bool has_addr = j.contains("addr");
  bool has_side = j.contains("side");
  if (u.kind == SpeakerKind::Justice) {
    if (!has_addr || has_side) {
      throw MalformedRecord(line_no, "justice utterance requires \"addr\" and no \"side\"");
    }
    u.addressee_side = require_side(j, "addr", line_no);
  } else {
    if (!has_side || has_addr) {
      throw MalformedRecord(line_no, "lawyer utterance requires \"side\" and no \"addr\"");
    }
    u.lawyer_side = require_side(j, "side", line_no);
  }

  if (auto tags = j.find("tags"); tags != j.end()) {
    if (!tags->is_array()) throw MalformedRecord(line_no, "\"tags\" must be an array");
    std::vector<PretaggedToken> pre;
    pre.reserve(tags->size());
    for (const auto& entry : *tags) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !entry[1].is_string()) {
        throw MalformedRecord(line_no, "\"tags\" entries must be [surface, tag] pairs");
      }
      auto tag = tag_from_string(entry[1].get<std::string>());
      if (!tag) {
        throw MalformedRecord(line_no, "unknown tag \"" + entry[1].get<std::string>() + "\"");
      }
      pre.push_back({entry[0].get<std::string>(), *tag});
    }
    u.pretagged = std::move(pre);
  }
  return u;
}

}  // namespace

ParsedRecord parse_record(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw MalformedRecord(line_no, e.what());
  }
  if (!j.is_object()) throw MalformedRecord(line_no, "record is not an object");
  std::string kind = require_string(j, "kind", line_no);
  if (kind == "case") return parse_case(j, line_no);
  if (kind == "utt") return parse_utterance(j, line_no);
  throw MalformedRecord(line_no, "\"kind\" must be case or utt");
}

std::string serialize_record(const CaseMeta& meta) {
  json j;
  j["kind"] = "case";
  j["case"] = meta.case_id;
  j["winner"] = std::string(to_string(meta.winner));
  json votes = json::object();
  for (const auto& [id, side] : meta.justice_votes) {
    votes[id] = std::string(to_string(side));
  }
  j["votes"] = votes;
  return j.dump();
}

std::string serialize_record(const Utterance& u) {
  json j;
  j["kind"] = "utt";
  j["case"] = u.case_id;
  j["idx"] = u.index;
  j["speaker"] = u.speaker_id;
  j["sk"] = u.kind == SpeakerKind::Justice ? "justice" : "lawyer";
  if (u.kind == SpeakerKind::Justice && u.addressee_side) {
    j["addr"] = std::string(to_string(*u.addressee_side));
  }
  if (u.kind == SpeakerKind::Lawyer && u.lawyer_side) {
    j["side"] = std::string(to_string(*u.lawyer_side));
  }
  j["text"] = u.text;
  if (u.pretagged) {
    json tags = json::array();
    for (const auto& t : *u.pretagged) {
      tags.push_back(json::array({t.surface, std::string(to_string(t.tag))}));
    }
    j["tags"] = tags;
  }
  return j.dump();
}

std::string serialize_record(const ParsedRecord& record) {
  if (std::holds_alternative<Utterance>(record)) {
    return serialize_record(std::get<Utterance>(record));
  }
  return serialize_record(std::get<CaseMeta>(record));
}

Corpus assemble_corpus(std::vector<ParsedRecord> records) {
  Corpus corpus;
  for (auto& record : records) {
    if (std::holds_alternative<CaseMeta>(record)) {
      auto& meta = std::get<CaseMeta>(record);
      auto [it, inserted] = corpus.cases.emplace(meta.case_id, std::move(meta));
      if (!inserted) {
        throw MalformedRecord(0, "duplicate case record \"" + it->first + "\"");
      }
    } else {
      corpus.utterances.push_back(std::move(std::get<Utterance>(record)));
    }
  }

  std::sort(corpus.utterances.begin(), corpus.utterances.end(),
            [](const Utterance& a, const Utterance& b) {
              if (a.case_id != b.case_id) return a.case_id < b.case_id;
              return a.index < b.index;
            });

  // Validate: cases resolve, votes cover speaking justices, indices dense.
  std::string prev_case;
  int prev_index = -1;
  for (auto& u : corpus.utterances) {
    auto it = corpus.cases.find(u.case_id);
    if (it == corpus.cases.end()) throw DanglingCase(u.case_id);
    if (u.kind == SpeakerKind::Justice &&
        !it->second.justice_votes.count(u.speaker_id)) {
      throw MissingVote(u.case_id, u.speaker_id);
    }
    if (u.case_id != prev_case) {
      prev_case = u.case_id;
      prev_index = -1;
    }
    if (u.index != prev_index + 1) {
      throw MalformedRecord(
          0, "utterance indices for case \"" + u.case_id +
                 "\" are not dense from 0 (saw " + std::to_string(u.index) +
                 " after " + std::to_string(prev_index) + ")");
    }
    prev_index = u.index;

    u.sentences = sentence_split(u.text);
    corpus.diagnostics.sentences += u.sentences.size();
  }

  corpus.diagnostics.cases = corpus.cases.size();
  corpus.diagnostics.utterances = corpus.utterances.size();
  return corpus;
}

Corpus load_corpus_text(std::string_view text) {
  std::vector<ParsedRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++line_no;
    auto stripped = trim(line);
    if (!stripped.empty() && stripped[0] != '#') {
      records.push_back(parse_record(stripped, line_no));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return assemble_corpus(std::move(records));
}

Corpus load_corpus(const std::filesystem::path& path) {
  return load_corpus_text(read_file(path));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::string out;
  for (const auto& [id, meta] : corpus.cases) {
    out += serialize_record(meta);
    out += '\n';
  }
  for (const auto& u : corpus.utterances) {
    out += serialize_record(u);
    out += '\n';
  }
  write_file(path, out);
}

namespace {

bool is_terminal_punct(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closing(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}
bool is_ascii_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

const std::array<std::string_view, 7> kGuardedAbbrevs = {
    "Mr", "Mrs", "Dr", "J", "v", "No", "U.S"};

// Word (run of non-space characters, leading punctuation stripped) that ends
// right before the period at position `dot`.
bool abbreviation_guard(std::string_view text, std::size_t dot) {
  std::size_t end = dot;
  std::size_t begin = end;
  while (begin > 0 && !is_ascii_space(text[begin - 1])) --begin;
  while (begin < end && !is_ascii_letter(text[begin]) &&
         !(text[begin] >= '0' && text[begin] <= '9')) {
    ++begin;
  }
  if (begin >= end) return false;
  std::string_view word = text.substr(begin, end - begin);
  if (word.size() == 1 && is_ascii_letter(word[0])) return true;
  for (auto abbrev : kGuardedAbbrevs) {
    if (word == abbrev) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> sentence_split(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    auto piece = trim(text.substr(start, end - start));
    if (!piece.empty()) sentences.emplace_back(piece);
    start = end;
  };
  while (i < text.size()) {
    char c = text[i];
    if (!is_terminal_punct(c)) {
      ++i;
      continue;
    }
    bool guarded = (c == '.') && abbreviation_guard(text, i);
    std::size_t j = i + 1;
    while (j < text.size() && is_terminal_punct(text[j])) ++j;
    while (j < text.size() && is_closing(text[j])) ++j;
    bool at_boundary = j >= text.size() || is_ascii_space(text[j]);
    if (at_boundary && !guarded) {
      flush(j);
    }
    i = j > i ? j : i + 1;
  }
  flush(text.size());
  return sentences;
}

}  // namespace courtrel
