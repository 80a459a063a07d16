#include "courtrel/grouping.hpp"

#include <algorithm>
#include <set>

#include "courtrel/errors.hpp"

namespace courtrel {

char to_char(Kappa k) {
  switch (k) {
    case Kappa::A: return 'A';
    case Kappa::B: return 'B';
    case Kappa::C: return 'C';
    case Kappa::D: return 'D';
  }
  return '?';
}

std::optional<Kappa> kappa_from_char(char c) {
  switch (c) {
    case 'A': case 'a': return Kappa::A;
    case 'B': case 'b': return Kappa::B;
    case 'C': case 'c': return Kappa::C;
    case 'D': case 'd': return Kappa::D;
    default: return std::nullopt;
  }
}

KappaTraits traits_of(Kappa k) {
  switch (k) {
    case Kappa::A: return {true, true};
    case Kappa::B: return {true, false};
    case Kappa::C: return {false, true};
    case Kappa::D: return {false, false};
  }
  return {true, true};
}

RoleId role_of(const Utterance& u, const CaseMeta& meta) {
  if (u.kind == SpeakerKind::Lawyer) {
    if (!u.lawyer_side) {
      throw InternalError("lawyer utterance without a side in case " + u.case_id);
    }
    return *u.lawyer_side == Side::Petitioner ? RoleId::LawyerPetitioner
                                              : RoleId::LawyerRespondent;
  }
  auto vote = meta.justice_votes.find(u.speaker_id);
  if (vote == meta.justice_votes.end()) {
    throw MissingVote(u.case_id, u.speaker_id);
  }
  if (!u.addressee_side) {
    throw InternalError("justice utterance without an addressee in case " + u.case_id);
  }
  bool votes_pet = vote->second == Side::Petitioner;
  bool speaks_to_pet = *u.addressee_side == Side::Petitioner;
  if (votes_pet) {
    return speaks_to_pet ? RoleId::JusticeVotePetToPet : RoleId::JusticeVotePetToResp;
  }
  return speaks_to_pet ? RoleId::JusticeVoteRespToPet : RoleId::JusticeVoteRespToResp;
}

std::vector<Kappa> kappa_of(RoleId role, Side winner) {
  bool pet_won = winner == Side::Petitioner;
  switch (role) {
    // Justice roles: the supportive pairs are (1,5) and (4,6); supportive
    // lands in A on a won lawsuit and B on a lost one, unsupported in C/D.
    case RoleId::JusticeVotePetToPet:    // supportive of petitioner's lawyer
      return {pet_won ? Kappa::A : Kappa::B};
    case RoleId::JusticeVoteRespToResp:  // supportive of respondent's lawyer
      return {pet_won ? Kappa::B : Kappa::A};
    case RoleId::JusticeVoteRespToPet:   // unsupported petitioner's lawyer
      return {pet_won ? Kappa::C : Kappa::D};
    case RoleId::JusticeVotePetToResp:   // unsupported respondent's lawyer
      return {pet_won ? Kappa::D : Kappa::C};
    // Lawyer roles belong to one supportive and one unsupported group, both
    // with the outcome of the lawyer's own side.
    case RoleId::LawyerPetitioner:
      return pet_won ? std::vector<Kappa>{Kappa::A, Kappa::C}
                     : std::vector<Kappa>{Kappa::B, Kappa::D};
    case RoleId::LawyerRespondent:
      return pet_won ? std::vector<Kappa>{Kappa::B, Kappa::D}
                     : std::vector<Kappa>{Kappa::A, Kappa::C};
  }
  throw InternalError("invalid role id");
}

Partition make_partition(const Corpus& corpus) {
  Partition result;
  for (const auto& u : corpus.utterances) {
    const CaseMeta& meta = corpus.case_of(u);
    if (u.kind == SpeakerKind::Justice && !u.addressee_side) {
      ++result.excluded;
      continue;
    }
    RoleId role = role_of(u, meta);
    for (Kappa k : kappa_of(role, meta.winner)) {
      result.pools[static_cast<int>(k)].push_back({u.case_id, u.index});
    }
  }
  for (int i = 0; i < kKappaCount; ++i) {
    auto& pool = result.pools[i];
    std::sort(pool.begin(), pool.end());
    std::set<std::string> lawsuits;
    for (const auto& ref : pool) lawsuits.insert(ref.case_id);
    result.diagnostics[i] = {pool.size(), lawsuits.size()};
  }
  return result;
}

}  // namespace courtrel
