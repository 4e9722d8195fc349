#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xcoref/corpus.h"
#include "xcoref/scoring.h"
#include "xcoref/sieves.h"

namespace xcoref {

MentionKey mention_key(const Mention &m);

ChainSet to_chain_set(std::span<const Chain> chains, const CorpusIndex &index);

// Gold partition from the per-mention gold labels. Mentions without a label
// are their own gold chain.
ChainSet gold_chain_set(const CorpusBundle &corpus);

// Token counts per sentence, for the CoNLL writer.
SentenceLengths sentence_lengths(const CorpusBundle &corpus);

// Chains of one topic ready for output.
struct TopicChains {
  std::string topic;
  std::vector<Chain> chains;
  const CorpusBundle *corpus = nullptr;
};

// {"trace": path|null, "topics": [{"topic", "chains": [{"chain_id",
// "mentions": [{"id", "doc", "sent", "start", "end"}]}]}]}. Topic and chain
// order is kept as given, so equal inputs give byte-identical output.
void write_chains_json(std::span<const TopicChains> topics, const std::optional<std::string> &trace_path,
                       std::ostream &out);

// Reads a chains file back as one partition per topic. Throws FormatError.
std::vector<std::pair<std::string, ChainSet>> read_chains_json(std::istream &in);

// One JSON object per line: sieve, winner, absorbed, rule, score, topic.
void write_trace_jsonl(const std::string &topic, std::span<const TraceEvent> trace,
                       std::ostream &out);

}  // namespace xcoref
