#ifndef COURTREL_CHUNKER_HPP
#define COURTREL_CHUNKER_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "courtrel/corpus.hpp"
#include "courtrel/tags.hpp"

namespace courtrel {

struct Token {
  std::string surface;
  std::size_t begin = 0;  // character offsets into the sentence
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct TaggedToken {
  std::string surface;
  CoarseTag tag = CoarseTag::Noun;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const TaggedToken&) const = default;
};

struct NounPhrase {
  std::vector<TaggedToken> tokens;
  std::string canonical;  // underscore-joined surfaces, no whitespace
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t first_token = 0;  // token indices within the sentence
  std::size_t last_token = 0;

  bool operator==(const NounPhrase&) const = default;
};

// Whitespace/punctuation tokenizer. Underscore is a word character;
// apostrophes, periods and hyphens between word characters stay attached.
std::vector<Token> tokenize(std::string_view sentence);

// Two-tier lexicon backing the rule tagger. Closed-class entries match
// case-insensitively; content entries match exact-case always, lowercase
// only for tokens that are not capitalized mid-sentence.
class Lexicon {
 public:
  static const Lexicon& builtin();

  void add_closed(std::string surface, CoarseTag tag);
  void add_content(std::string surface, CoarseTag tag);
  void load_tsv(std::string_view text, bool closed, std::string_view source_name = "<string>");
  void load_tsv_file(const std::filesystem::path& path, bool closed);

  const CoarseTag* closed_lookup(std::string_view lowercase) const;
  const CoarseTag* content_exact(std::string_view surface) const;
  const CoarseTag* content_lower(std::string_view lowercase) const;

 private:
  std::unordered_map<std::string, CoarseTag> closed_;
  std::unordered_map<std::string, CoarseTag> content_;
  std::unordered_map<std::string, CoarseTag> content_lower_;
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<TaggedToken> tag(std::span<const Token> tokens) const = 0;
};

// Rule cascade: punctuation, numerals, closed-class lexicon, exact-case
// content lexicon, mid-sentence capitalization -> PROPN, lowercase content
// lexicon, suffix rules, fallback NOUN.
class RuleTagger : public Tagger {
 public:
  RuleTagger() : lexicon_(&Lexicon::builtin()) {}
  explicit RuleTagger(const Lexicon& lexicon) : lexicon_(&lexicon) {}
  std::vector<TaggedToken> tag(std::span<const Token> tokens) const override;

 private:
  const Lexicon* lexicon_;
};

// Maximal (ADJ|NOUN|PROPN)*(NOUN|PROPN) chunks.
std::vector<NounPhrase> chunk(std::span<const TaggedToken> tagged);

struct AnalyzedSentence {
  std::string text;
  std::vector<TaggedToken> tokens;
  std::vector<NounPhrase> chunks;
};

AnalyzedSentence analyze_sentence(std::string_view sentence, const Tagger& tagger);

// Analyzes every sentence of the utterance; consumes u.pretagged instead of
// the tagger when present (tokens must align with the bundled tokenizer).
std::vector<AnalyzedSentence> analyze_utterance(const Utterance& u, const Tagger& tagger);

}  // namespace courtrel

#endif
