#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xcoref/corpus.h"

namespace xcoref {

using WordVector = std::vector<double>;

inline constexpr std::uint64_t kDefaultOovSeed = 20210901;

// How a token was resolved by VectorStore::lookup.
enum class LookupPath { kExact, kLowercase, kOov };

struct LookupResult {
  WordVector vector;
  LookupPath path = LookupPath::kExact;
};

// Word vectors in the GloVe / word2vec text layout. Tokens missing from the
// vocabulary map to a pseudo-random unit vector derived from the token and
// the OOV seed, so the same token always gets the same vector.
class VectorStore {
 public:
  explicit VectorStore(std::size_t dimension, std::uint64_t oov_seed = kDefaultOovSeed);

  // Parses `token c1 ... cd` lines. A leading `N d` header line is detected
  // and skipped. Stops after `limit` entries when given.
  static VectorStore parse(std::istream &in, std::optional<std::size_t> limit = std::nullopt,
                           std::uint64_t oov_seed = kDefaultOovSeed);
  static VectorStore load(const std::string &path,
                          std::optional<std::size_t> limit = std::nullopt,
                          std::uint64_t oov_seed = kDefaultOovSeed);

  // Throws DimensionMismatch or FormatError (non-finite component).
  void add(std::string token, WordVector vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t oov_seed() const { return oov_seed_; }
  bool contains(std::string_view token) const;

  // Exact match, then the lowercased token, then the OOV vector.
  LookupResult lookup_with_path(std::string_view token) const;
  WordVector lookup(std::string_view token) const {
    return lookup_with_path(token).vector;
  }
  WordVector oov_vector(std::string_view token) const;

 private:
  std::size_t dimension_;
  std::uint64_t oov_seed_;
  std::unordered_map<std::string, WordVector> entries_;
};

// Mean of the vectors of the unique non-stopword token texts. When every
// token is a stopword, the mean is taken over all unique texts instead.
// Throws EmptyInput on an empty token list.
WordVector phrase_mean(const VectorStore &store, std::span<const Token> tokens);

// Like phrase_mean, but the head token's vector is multiplied by k. The
// denominator is the number of distinct contributing tokens, so k = 1
// reproduces phrase_mean. `head_position` indexes into `tokens`.
WordVector weighted_phrase_vector(const VectorStore &store, std::span<const Token> tokens,
                                  std::size_t head_position, double k);

// Cosine similarity; 0 when either vector is all zeros. Throws
// DimensionMismatch.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace xcoref
