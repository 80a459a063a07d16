#ifndef COURTREL_RELEXT_HPP
#define COURTREL_RELEXT_HPP

#include <compare>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "courtrel/chunker.hpp"
#include "courtrel/grouping.hpp"

namespace courtrel {

enum class RelationType : int {
  IsA = 0,
  PartOf = 1,
  UsedBy = 2,
  UsedFor = 3,
  UsedIn = 4,
  UsedOver = 5,
  UsedWith = 6,
};

inline constexpr int kRelationCount = 7;
inline constexpr std::array<RelationType, 7> kAllRelations{
    RelationType::IsA,    RelationType::PartOf,   RelationType::UsedBy,
    RelationType::UsedFor, RelationType::UsedIn,  RelationType::UsedOver,
    RelationType::UsedWith};

std::string_view to_string(RelationType r);
std::optional<RelationType> relation_from_string(std::string_view name);

struct PatternElement {
  enum class Kind { Literal, Tag, SlotLeft, SlotRight, Gap };
  Kind kind = Kind::Literal;
  std::string literal;               // Kind::Literal (lowercase)
  CoarseTag tag = CoarseTag::Noun;   // Kind::Tag
  int max_gap = 0;                   // Kind::Gap, 0..10
};

// One DSL line, expanded over its optional elements into concrete variants.
struct SurfacePattern {
  std::string id;
  RelationType relation = RelationType::IsA;
  int priority = 0;  // file order; smaller wins at dedup
  std::vector<std::vector<PatternElement>> variants;
};

struct PatternPack {
  std::vector<SurfacePattern> patterns;  // priority-sorted

  static const PatternPack& builtin();
  static std::string_view builtin_text();
};

PatternPack compile_patterns(std::string_view text);
PatternPack load_patterns(const std::filesystem::path& path);

struct RelationInstance {
  RelationType relation = RelationType::IsA;
  std::string left;
  std::string right;
  std::string case_id;
  int utterance_index = 0;
  int sentence_index = 0;
  std::string pattern_id;

  auto operator<=>(const RelationInstance&) const = default;
};

// All pattern matches over one analyzed sentence, deduplicated per
// (relation, left, right) keeping the highest-priority pattern, with
// and/or/comma coordination expanded on the right slot. Provenance
// fields are left empty.
std::vector<RelationInstance> extract(const AnalyzedSentence& sentence,
                                      const PatternPack& pack);

// Streams instances for the given utterances in deterministic order
// (corpus order, then sentence, then pattern priority). Thread-count only
// affects wall time, never output order.
void extract_stream(const Corpus& corpus, const std::vector<UttRef>& refs,
                    const PatternPack& pack, const Tagger& tagger, int threads,
                    const std::function<void(const RelationInstance&)>& sink);

// pool == nullopt selects every utterance once.
std::vector<RelationInstance> extract_corpus(const Corpus& corpus,
                                             const Partition& partition,
                                             std::optional<Kappa> pool,
                                             const PatternPack& pack,
                                             const Tagger& tagger,
                                             int threads = 1);

}  // namespace courtrel

#endif
