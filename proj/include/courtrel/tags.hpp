#ifndef COURTREL_TAGS_HPP
#define COURTREL_TAGS_HPP

#include <optional>
#include <string>
#include <string_view>

namespace courtrel {

// Coarse tagset; the chunk grammar only needs ADJ/NOUN/PROPN and the
// patterns only distinguish VERB/ADP beyond that.
enum class CoarseTag { Adj, Noun, Propn, Verb, Adp, Det, Pron, Conj, Num, Punct, Other };

inline constexpr int kTagCount = 11;

std::string_view to_string(CoarseTag tag);
std::optional<CoarseTag> tag_from_string(std::string_view name);

}  // namespace courtrel

#endif
