#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xcoref/config.h"
#include "xcoref/corpus.h"
#include "xcoref/vector_store.h"

namespace xcoref {

// One whole-chain merge (or, in S4, one source chain feeding a re-clustered
// group).
struct TraceEvent {
  int sieve_id = 0;
  std::string winner;
  std::string absorbed;
  std::string rule;
  std::optional<double> score;
  // Types at merge time, for auditing comparability. Not serialized.
  ConceptType winner_type;
  ConceptType absorbed_type;

  bool operator==(const TraceEvent &) const = default;
};

// Chains under resolution. Every chain carries a concept type; chains are
// kept in corpus order of their first mention.
struct ChainState {
  std::vector<Chain> chains;
  std::vector<TraceEvent> trace;
};

// Shared, read-only inputs of the sieves.
struct SieveContext {
  const CorpusIndex &index;
  const VectorStore &store;
  const PipelineConfig &config;
};

// Splits the initial chains by entity-link title and types every chain.
ChainState initial_state(const SieveContext &ctx);

// Winner-takes-all merge of chains sharing an entity-link title.
void sieve1_nel(ChainState &state, const SieveContext &ctx);
// NE chains with identical NE heads, or an NE head matching an NE compound.
void sieve2_ne_heads(ChainState &state, const SieveContext &ctx);
// Non-NE chains into NE chains by phrase containment, token overlap or
// phrase similarity.
void sieve3_non_ne(ChainState &state, const SieveContext &ctx);
// Re-clusters group mentions, then attaches groups to country chains.
void sieve4_groups(ChainState &state, const SieveContext &ctx);
// Hierarchical clustering of the remaining abstract / non-NE chains.
void sieve5_abstract(ChainState &state, const SieveContext &ctx);

struct StageSnapshot {
  std::string name;  // "init", "S1" .. "S5"
  std::vector<Chain> chains;
};

struct LookupCounts {
  std::size_t exact = 0;
  std::size_t lowercase = 0;
  std::size_t oov = 0;
};

struct PipelineResult {
  std::vector<Chain> chains;
  std::vector<TraceEvent> trace;
  std::vector<StageSnapshot> stages;
  // How the corpus tokens resolve in the vector store.
  LookupCounts lookups;
};

// Full pipeline over one topic. Checks the partition after every stage and
// throws InvariantViolation if it breaks.
PipelineResult run_pipeline(const CorpusBundle &corpus, const VectorStore &store,
                            const PipelineConfig &config);

}  // namespace xcoref
