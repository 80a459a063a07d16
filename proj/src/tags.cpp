#include "courtrel/tags.hpp"

namespace courtrel {

std::string_view to_string(CoarseTag tag) {
  switch (tag) {
    case CoarseTag::Adj: return "ADJ";
    case CoarseTag::Noun: return "NOUN";
    case CoarseTag::Propn: return "PROPN";
    case CoarseTag::Verb: return "VERB";
    case CoarseTag::Adp: return "ADP";
    case CoarseTag::Det: return "DET";
    case CoarseTag::Pron: return "PRON";
    case CoarseTag::Conj: return "CONJ";
    case CoarseTag::Num: return "NUM";
    case CoarseTag::Punct: return "PUNCT";
    case CoarseTag::Other: return "OTHER";
  }
  return "OTHER";
}

std::optional<CoarseTag> tag_from_string(std::string_view name) {
  if (name == "ADJ") return CoarseTag::Adj;
  if (name == "NOUN") return CoarseTag::Noun;
  if (name == "PROPN") return CoarseTag::Propn;
  if (name == "VERB") return CoarseTag::Verb;
  if (name == "ADP") return CoarseTag::Adp;
  if (name == "DET") return CoarseTag::Det;
  if (name == "PRON") return CoarseTag::Pron;
  if (name == "CONJ") return CoarseTag::Conj;
  if (name == "NUM") return CoarseTag::Num;
  if (name == "PUNCT") return CoarseTag::Punct;
  if (name == "OTHER") return CoarseTag::Other;
  return std::nullopt;
}

}  // namespace courtrel
