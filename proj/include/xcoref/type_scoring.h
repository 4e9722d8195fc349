#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xcoref/concept_type.h"
#include "xcoref/corpus.h"

namespace xcoref {

// Rank-weighted counts of WordNet lexicographer categories over a chain's
// head senses.
struct TypeScore {
  std::map<std::string, double> weights;

  bool empty() const { return weights.empty(); }
};

// Weight of a sense at the given rank: 1 / rank.
double sense_weight(int rank);

// Lexicographer category -> base type table. The line order of the source
// file is the tie-break order between equally scored categories.
class CategoryMap {
 public:
  static CategoryMap parse(std::istream &in);
  static CategoryMap load(const std::string &path);
  // The table compiled in from data/categories.txt.
  static const CategoryMap &defaults();

  // Unknown categories map to MISC.
  BaseType base_of(std::string_view category) const;
  // Tie-break rank; unknown categories sort after every known one.
  std::size_t order_of(std::string_view category) const;
  std::size_t size() const { return order_.size(); }

 private:
  std::unordered_map<std::string, BaseType> base_;
  std::unordered_map<std::string, std::size_t> order_;
};

// Which concept-type pairs a sieve may compare. Symmetric by construction;
// files listing an asymmetric matrix are rejected.
class ComparisonMatrix {
 public:
  explicit ComparisonMatrix(int sieve_id = 0) : sieve_id_(sieve_id) {}

  // Header row of type names, then one row per type: name followed by
  // non-negative integer cells (>= 1 allows comparison). '#' starts a
  // comment line. Unknown type names are accepted and ignored.
  static ComparisonMatrix parse(std::istream &in, int sieve_id);
  static ComparisonMatrix load(const std::string &path, int sieve_id);
  // Matrix compiled in from data/cm<sieve_id>.tsv.
  static const ComparisonMatrix &defaults(int sieve_id);

  int sieve_id() const { return sieve_id_; }
  void set(ConceptType x, ConceptType y, bool allowed);
  // Throws MissingEntry if the pair was never specified.
  bool allows(ConceptType x, ConceptType y) const;
  bool has_entry(ConceptType x, ConceptType y) const;

 private:
  static int key(ConceptType t);

  int sieve_id_;
  std::map<std::pair<int, int>, bool> entries_;
};

TypeScore score_types(std::span<const Mention *const> mentions);
TypeScore score_types(const Chain &chain, const CorpusIndex &index);

// Arg-max category mapped through `categories`; COUNTRY needs a GPE-labeled
// mention in the chain, otherwise it degrades to MISC. is_ne holds when at
// least half of the mentions carry an NE label.
ConceptType assign_type(const TypeScore &score, std::span<const Mention *const> mentions,
                        const CategoryMap &categories = CategoryMap::defaults());
ConceptType assign_type(const TypeScore &score, const Chain &chain, const CorpusIndex &index,
                        const CategoryMap &categories = CategoryMap::defaults());

bool is_ne_majority(std::span<const Mention *const> mentions);

bool comparable(const ComparisonMatrix &cm, ConceptType x, ConceptType y);

}  // namespace xcoref
