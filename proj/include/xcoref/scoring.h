#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace xcoref {

// Identifies a mention independently of any chain file: document, sentence
// and inclusive token span.
struct MentionKey {
  std::string doc_id;
  int sent_index = 0;
  int start = 0;
  int end = 0;

  auto operator<=>(const MentionKey &) const = default;
};

std::string to_string(const MentionKey &key);

// A partition of mention keys. Construction canonicalizes: keys inside a chain
// are sorted and chains are ordered by their first key, so metric values do
// not depend on input order.
class ChainSet {
 public:
  ChainSet() = default;
  // Throws DuplicateMention if a key occurs twice. Empty chains are dropped.
  explicit ChainSet(std::vector<std::vector<MentionKey>> chains);

  const std::vector<std::vector<MentionKey>> &chains() const { return chains_; }
  std::size_t size() const { return chains_.size(); }
  std::size_t mention_count() const { return chain_of_.size(); }
  // Index of the chain containing the key, or -1.
  int chain_of(const MentionKey &key) const;
  const std::map<MentionKey, int> &membership() const { return chain_of_; }

  bool operator==(const ChainSet &other) const { return chains_ == other.chains_; }

 private:
  std::vector<std::vector<MentionKey>> chains_;
  std::map<MentionKey, int> chain_of_;
};

struct MetricResult {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;

  static MetricResult from(double recall, double precision);
  bool operator==(const MetricResult &) const = default;
};

struct ConllScores {
  MetricResult muc;
  MetricResult b_cubed;
  MetricResult ceaf_e;
  double conll_f1 = 0.0;
};

// Validates both sides against a common key universe. Keys are matched by
// exact equality; system keys absent from the gold side stay and are
// penalized by the metrics.
std::pair<ChainSet, ChainSet> align(const ChainSet &gold, const ChainSet &system);

MetricResult muc(const ChainSet &gold, const ChainSet &system);
MetricResult b_cubed(const ChainSet &gold, const ChainSet &system);
MetricResult ceaf_e(const ChainSet &gold, const ChainSet &system);
double conll_f1(const MetricResult &muc, const MetricResult &b_cubed, const MetricResult &ceaf_e);
ConllScores score_all(const ChainSet &gold, const ChainSet &system);

// Maximum-weight one-to-one assignment of rows to columns (Kuhn-Munkres).
// Returns the chosen column per row, or -1 for unmatched rows.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>> &weights);

// CoNLL-2012 skeleton writer: per document a "#begin document (<id>); part
// 000" block, one token per line, coreference brackets in the last column.
// `sentence_lengths` gives token counts per (document, sentence); sentences
// not listed get just enough tokens to cover their mentions.
using SentenceLengths = std::map<std::string, std::vector<int>>;
void write_conll(const ChainSet &chains, std::ostream &out,
                 const SentenceLengths &sentence_lengths = {});
ChainSet read_conll(std::istream &in);

}  // namespace xcoref
