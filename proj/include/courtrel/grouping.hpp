#ifndef COURTREL_GROUPING_HPP
#define COURTREL_GROUPING_HPP

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "courtrel/corpus.hpp"

namespace courtrel {

// Six speaker roles: 1-4 justices keyed by (vote, addressee side),
// 5-6 lawyers keyed by their own side.
enum class RoleId : int {
  JusticeVotePetToPet = 1,
  JusticeVotePetToResp = 2,
  JusticeVoteRespToPet = 3,
  JusticeVoteRespToResp = 4,
  LawyerPetitioner = 5,
  LawyerRespondent = 6,
};

enum class Kappa : int { A = 0, B = 1, C = 2, D = 3 };

inline constexpr int kKappaCount = 4;
inline constexpr std::array<Kappa, 4> kAllKappas{Kappa::A, Kappa::B, Kappa::C, Kappa::D};

char to_char(Kappa k);
std::optional<Kappa> kappa_from_char(char c);

// A=(supportive,win) B=(supportive,lose) C=(unsupported,win) D=(unsupported,lose)
struct KappaTraits {
  bool supportive;
  bool win;
};
KappaTraits traits_of(Kappa k);

RoleId role_of(const Utterance& u, const CaseMeta& meta);

// Justice roles map to exactly one pool, lawyer roles to the two pools of
// their side's cooperation groups (sorted: supportive pool first).
std::vector<Kappa> kappa_of(RoleId role, Side winner);

struct UttRef {
  std::string case_id;
  int index = 0;

  auto operator<=>(const UttRef&) const = default;
};

struct PoolDiagnostics {
  std::size_t utterances = 0;
  std::size_t lawsuits = 0;

  bool operator==(const PoolDiagnostics&) const = default;
};

struct Partition {
  std::array<std::vector<UttRef>, kKappaCount> pools;  // each sorted
  std::array<PoolDiagnostics, kKappaCount> diagnostics;
  // Justice utterances with a recorded vote but no addressee side;
  // excluded from every pool.
  std::size_t excluded = 0;

  const std::vector<UttRef>& pool(Kappa k) const {
    return pools[static_cast<int>(k)];
  }
};

Partition make_partition(const Corpus& corpus);

}  // namespace courtrel

#endif
