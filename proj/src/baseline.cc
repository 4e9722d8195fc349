#include "xcoref/baseline.h"

#include <unordered_map>

#include "xcoref/text.h"

namespace xcoref {

std::vector<Chain> lemma_baseline(const CorpusBundle &corpus) {
  const CorpusIndex index(corpus);
  std::vector<Chain> chains;
  std::unordered_map<std::string, std::size_t> chain_of;
  for (const Mention &m : corpus.mentions) {
    const Token &head = index.head(m);
    const std::string lemma = to_lower(head.lemma.empty() ? head.text : head.lemma);
    auto [it, inserted] = chain_of.emplace(lemma, chains.size());
    if (inserted) {
      Chain c;
      c.id = "lemma:" + lemma;
      c.origin = ChainOrigin::kSingleton;
      chains.push_back(std::move(c));
    }
    Chain &c = chains[it->second];
    c.mention_ids.push_back(m.id);
    if (c.mention_ids.size() > 1) c.origin = ChainOrigin::kMerged;
  }
  return chains;
}

}  // namespace xcoref
