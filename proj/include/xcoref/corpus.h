#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xcoref/concept_type.h"

namespace xcoref {

// Longest structure subtree a mention may carry.
inline constexpr std::size_t kMaxSubtreeTokens = 20;

struct Token {
  int index = 0;
  std::string text;
  std::string lemma;
  std::string pos;
  bool stopword = false;

  bool operator==(const Token &) const = default;
};

using Sentence = std::vector<Token>;

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;

  bool operator==(const Document &) const = default;
};

// Dependency edge inside a mention's subtree. A governor of -1 marks the
// root attachment and is not a token.
struct DepEdge {
  int governor = -1;
  int dependent = 0;
  std::string relation;

  bool operator==(const DepEdge &) const = default;
};

struct SenseRank {
  std::string category;  // WordNet lexicographer category, e.g. noun.person
  int rank = 1;

  bool operator==(const SenseRank &) const = default;
};

struct Mention {
  std::string id;
  std::string doc_id;
  int sent_index = 0;
  int span_start = 0;  // inclusive
  int span_end = 0;    // inclusive
  int head_index = 0;
  std::optional<std::string> ne_type;
  std::optional<std::string> wiki_title;
  std::vector<SenseRank> sense_ranks;
  std::vector<DepEdge> dep_subtree;
  std::vector<int> struct_subtree;
  // Evaluation only; the pipeline never reads it.
  std::optional<std::string> gold_concept;

  bool operator==(const Mention &) const = default;
};

enum class ChainOrigin { kWithinDocCr, kSingleton, kMerged };

std::string_view origin_name(ChainOrigin origin);

struct Chain {
  std::string id;
  std::vector<std::string> mention_ids;
  std::optional<ConceptType> concept_type;
  std::optional<std::string> wiki_title;
  ChainOrigin origin = ChainOrigin::kWithinDocCr;

  bool operator==(const Chain &) const = default;
};

// One topic: the documents of one corpus file, their candidate mentions and
// the chains produced by within-document coreference. After loading,
// mentions outside every within-document chain are wrapped as singletons, so
// initial_chains partitions the mention set.
struct CorpusBundle {
  std::string topic_id;
  std::vector<Document> documents;
  std::vector<Mention> mentions;
  std::vector<Chain> initial_chains;

  bool operator==(const CorpusBundle &) const = default;
};

// Parses one topic from line-delimited JSON. `topic_id` names the topic
// (load_corpus uses the file stem). Throws SchemaError / IntegrityError.
CorpusBundle parse_corpus(std::istream &in, std::string topic_id);
CorpusBundle load_corpus(const std::string &path);

// Writes the bundle back in the same format. Singleton chains are implied
// by the format and therefore not written.
void serialize_corpus(const CorpusBundle &bundle, std::ostream &out);

// True iff the chains partition exactly the given mention ids.
bool chain_partition_check(std::span<const Chain> chains,
                           std::span<const Mention> mentions);
bool chain_partition_check(std::span<const Chain> chains,
                           std::span<const std::string> mention_ids);

// Read-only lookups over a bundle. Holds pointers into the bundle, which
// must outlive it.
class CorpusIndex {
 public:
  explicit CorpusIndex(const CorpusBundle &bundle);

  const CorpusBundle &bundle() const { return *bundle_; }

  bool contains(std::string_view mention_id) const;
  const Mention &mention(std::string_view mention_id) const;
  // Position of the mention in bundle().mentions; the corpus order.
  std::size_t position(std::string_view mention_id) const;

  const Sentence &sentence(const Mention &m) const;
  const Token &token(const Mention &m, int index) const;
  const Token &head(const Mention &m) const { return token(m, m.head_index); }
  // Tokens of the mention span, in sentence order.
  std::span<const Token> span_tokens(const Mention &m) const;
  // Surface string of the span, tokens joined by single spaces.
  std::string span_text(const Mention &m) const;

  std::vector<const Mention *> mentions_of(const Chain &chain) const;

 private:
  const CorpusBundle *bundle_;
  std::unordered_map<std::string, std::size_t> mention_pos_;
  std::unordered_map<std::string, std::size_t> doc_pos_;
};

}  // namespace xcoref
