#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "xcoref/corpus.h"

namespace xcoref {

// Direct dependents of a mention's head, bucketed by relation label.
struct Modifiers {
  std::vector<int> compounds;    // compound
  std::vector<int> appositions;  // appos
  std::vector<int> adjectival;   // amod
  std::vector<int> noun_mods;    // nmod, nn

  bool operator==(const Modifiers &) const = default;
};

// Partitions every chain by the entity-link titles of its mentions. Mentions
// without a title follow the largest titled group (ties: smallest title).
// The group that receives them keeps the chain id; other groups get
// "<id>#<n>". Each output chain carries its group title.
std::vector<Chain> split_chains_by_wiki(std::span<const Chain> chains, const CorpusIndex &index);

struct Constituent {
  int start = 0;  // inclusive
  int end = 0;    // inclusive

  int size() const { return end - start + 1; }
};

// Tokens of the largest constituent containing the head with at most `cap`
// tokens; the head alone when none qualifies.
std::vector<int> cap_structure_subtree(std::span<const Constituent> constituents, int head_index,
                                       std::size_t cap = kMaxSubtreeTokens);

Modifiers extract_modifiers(const Mention &mention);

// Lowercased head plus adjectival, noun and compound modifiers, plus every
// apposition together with its own such modifiers.
std::set<std::string> representative_phrase(const Mention &mention, const CorpusIndex &index);
std::set<std::string> representative_phrase(const Chain &chain, const CorpusIndex &index);

// Lowercased compound and apposition modifier texts of the chain's mentions.
std::set<std::string> modifier_phrase(const Chain &chain, const CorpusIndex &index);

}  // namespace xcoref
