#pragma once

#include <vector>

#include "xcoref/corpus.h"

namespace xcoref {

// Groups mentions whose head lemmas match case-insensitively (the head text
// stands in for a missing lemma). Chains are named "lemma:<lemma>" and come
// in corpus order of their first mention.
std::vector<Chain> lemma_baseline(const CorpusBundle &corpus);

}  // namespace xcoref
