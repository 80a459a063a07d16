#include "courtrel/chunker.hpp"

#include <algorithm>

#include "courtrel/builtin_data.hpp"
#include "courtrel/errors.hpp"
#include "courtrel/util.hpp"

namespace courtrel {

namespace {

// Bytes >= 0x80 are UTF-8 continuations/starts; treat them as word material.
bool is_word_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (u >= 0x80) return true;
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

// Attached when flanked by word characters: I'm, J._Howard, well-known.
bool is_joiner(char c) { return c == '\'' || c == '.' || c == '-'; }

}  // namespace

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sentence.size();
  while (i < n) {
    char c = sentence[i];
    if (is_ascii_space(c)) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    if (is_word_char(c)) {
      while (i < n) {
        if (is_word_char(sentence[i])) {
          ++i;
        } else if (is_joiner(sentence[i]) && i + 1 < n && is_word_char(sentence[i + 1]) &&
                   i > begin) {
          ++i;
        } else {
          break;
        }
      }
    } else {
      ++i;  // one punctuation character per token
    }
    tokens.push_back({std::string(sentence.substr(begin, i - begin)), begin, i});
  }
  return tokens;
}

void Lexicon::add_closed(std::string surface, CoarseTag tag) {
  closed_[to_lower(surface)] = tag;
}

void Lexicon::add_content(std::string surface, CoarseTag tag) {
  content_lower_[to_lower(surface)] = tag;
  content_[std::move(surface)] = tag;
}

void Lexicon::load_tsv(std::string_view text, bool closed, std::string_view source_name) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++line_no;
    auto stripped = trim(line);
    if (!stripped.empty() && stripped[0] != '#') {
      std::size_t tab = stripped.find('\t');
      if (tab == std::string_view::npos) {
        throw InputError("lexicon " + std::string(source_name) + ":" +
                         std::to_string(line_no) + ": expected surface<TAB>tag");
      }
      auto surface = trim(stripped.substr(0, tab));
      auto tag_name = trim(stripped.substr(tab + 1));
      auto tag = tag_from_string(tag_name);
      if (surface.empty() || !tag) {
        throw InputError("lexicon " + std::string(source_name) + ":" +
                         std::to_string(line_no) + ": bad entry");
      }
      if (closed) {
        add_closed(std::string(surface), *tag);
      } else {
        add_content(std::string(surface), *tag);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

void Lexicon::load_tsv_file(const std::filesystem::path& path, bool closed) {
  load_tsv(read_file(path), closed, path.string());
}

const CoarseTag* Lexicon::closed_lookup(std::string_view lowercase) const {
  auto it = closed_.find(std::string(lowercase));
  return it == closed_.end() ? nullptr : &it->second;
}

const CoarseTag* Lexicon::content_exact(std::string_view surface) const {
  auto it = content_.find(std::string(surface));
  return it == content_.end() ? nullptr : &it->second;
}

const CoarseTag* Lexicon::content_lower(std::string_view lowercase) const {
  auto it = content_lower_.find(std::string(lowercase));
  return it == content_lower_.end() ? nullptr : &it->second;
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon instance = [] {
    Lexicon lex;
    lex.load_tsv(builtin::closed_lexicon_text(), true, "<builtin closed>");
    lex.load_tsv(builtin::content_lexicon_text(), false, "<builtin content>");
    return lex;
  }();
  return instance;
}

namespace {

bool all_punct(std::string_view s) {
  for (char c : s) {
    if (is_word_char(c)) return false;
  }
  return !s.empty();
}

bool is_numeric(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '/' && c != ':' &&
               c != '%' && c != '$') {
      return false;
    }
  }
  return digit;
}

bool is_capitalized(std::string_view s) {
  return !s.empty() && s[0] >= 'A' && s[0] <= 'Z';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

CoarseTag suffix_tag(std::string_view lower, bool* matched) {
  *matched = true;
  if (ends_with(lower, "tion") || ends_with(lower, "ment") || ends_with(lower, "ness")) {
    return CoarseTag::Noun;
  }
  if (ends_with(lower, "al") || ends_with(lower, "ive") || ends_with(lower, "ous") ||
      ends_with(lower, "able")) {
    return CoarseTag::Adj;
  }
  if (ends_with(lower, "ly")) return CoarseTag::Other;
  if (ends_with(lower, "ing") || ends_with(lower, "ed")) return CoarseTag::Verb;
  *matched = false;
  return CoarseTag::Noun;
}

}  // namespace

std::vector<TaggedToken> RuleTagger::tag(std::span<const Token> tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    CoarseTag tag = CoarseTag::Noun;
    std::string lower = to_lower(tok.surface);
    if (all_punct(tok.surface)) {
      tag = CoarseTag::Punct;
    } else if (is_numeric(tok.surface)) {
      tag = CoarseTag::Num;
    } else if (const CoarseTag* t = lexicon_->closed_lookup(lower)) {
      tag = *t;
    } else if (const CoarseTag* exact = lexicon_->content_exact(tok.surface)) {
      tag = *exact;
    } else if (i > 0 && is_capitalized(tok.surface)) {
      tag = CoarseTag::Propn;
    } else if (const CoarseTag* lt = lexicon_->content_lower(lower)) {
      tag = *lt;
    } else {
      bool matched = false;
      CoarseTag by_suffix = suffix_tag(lower, &matched);
      tag = matched ? by_suffix : CoarseTag::Noun;
    }
    out.push_back({tok.surface, tag, tok.begin, tok.end});
  }
  return out;
}

namespace {

bool chunkable(CoarseTag t) {
  return t == CoarseTag::Adj || t == CoarseTag::Noun || t == CoarseTag::Propn;
}

bool head_tag(CoarseTag t) { return t == CoarseTag::Noun || t == CoarseTag::Propn; }

}  // namespace

std::vector<NounPhrase> chunk(std::span<const TaggedToken> tagged) {
  std::vector<NounPhrase> phrases;
  std::size_t i = 0;
  const std::size_t n = tagged.size();
  while (i < n) {
    if (!chunkable(tagged[i].tag)) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < n && chunkable(tagged[run_end].tag)) ++run_end;
    // Trim trailing adjectives so the chunk ends on a noun head.
    std::size_t last = run_end;
    while (last > i && !head_tag(tagged[last - 1].tag)) --last;
    if (last > i) {
      NounPhrase np;
      np.first_token = i;
      np.last_token = last - 1;
      np.begin = tagged[i].begin;
      np.end = tagged[last - 1].end;
      for (std::size_t k = i; k < last; ++k) {
        if (k > i) np.canonical += '_';
        np.canonical += tagged[k].surface;
        np.tokens.push_back(tagged[k]);
      }
      phrases.push_back(std::move(np));
    }
    i = run_end;
  }
  return phrases;
}

AnalyzedSentence analyze_sentence(std::string_view sentence, const Tagger& tagger) {
  AnalyzedSentence out;
  out.text = std::string(sentence);
  out.tokens = tagger.tag(tokenize(sentence));
  out.chunks = chunk(out.tokens);
  return out;
}

std::vector<AnalyzedSentence> analyze_utterance(const Utterance& u, const Tagger& tagger) {
  std::vector<AnalyzedSentence> out;
  out.reserve(u.sentences.size());
  if (!u.pretagged) {
    for (const auto& sentence : u.sentences) {
      out.push_back(analyze_sentence(sentence, tagger));
    }
    return out;
  }

  const auto& pre = *u.pretagged;
  std::size_t cursor = 0;
  for (const auto& sentence : u.sentences) {
    AnalyzedSentence a;
    a.text = sentence;
    for (const Token& tok : tokenize(sentence)) {
      if (cursor >= pre.size()) {
        throw PretagMismatch("pre-tagged stream for case " + u.case_id +
                             " utterance " + std::to_string(u.index) +
                             " is shorter than the token stream");
      }
      if (pre[cursor].surface != tok.surface) {
        throw PretagMismatch("pre-tagged token \"" + pre[cursor].surface +
                             "\" does not match tokenizer output \"" + tok.surface +
                             "\" in case " + u.case_id + " utterance " +
                             std::to_string(u.index));
      }
      a.tokens.push_back({tok.surface, pre[cursor].tag, tok.begin, tok.end});
      ++cursor;
    }
    a.chunks = chunk(a.tokens);
    out.push_back(std::move(a));
  }
  if (cursor != pre.size()) {
    throw PretagMismatch("pre-tagged stream for case " + u.case_id + " utterance " +
                         std::to_string(u.index) + " has " +
                         std::to_string(pre.size() - cursor) + " unused tokens");
  }
  return out;
}

}  // namespace courtrel
