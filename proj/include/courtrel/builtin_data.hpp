#ifndef COURTREL_BUILTIN_DATA_HPP
#define COURTREL_BUILTIN_DATA_HPP

#include <string_view>

namespace courtrel::builtin {

// Embedded copies of data/patterns.default and data/lexicon_*.tsv,
// baked in at configure time so the toolchain works from any directory.
std::string_view patterns_text();
std::string_view closed_lexicon_text();
std::string_view content_lexicon_text();

}  // namespace courtrel::builtin

#endif
