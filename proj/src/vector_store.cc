#include "xcoref/vector_store.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <unordered_set>

#include "xcoref/errors.h"
#include "xcoref/text.h"

namespace xcoref {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in (0, 1].
double unit_uniform(std::uint64_t &state) {
  return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
}

bool parse_double(std::string_view s, double &out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_size(std::string_view s, std::size_t &out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Distinct contributing tokens per the phrase_mean rule, in first-seen order.
std::vector<std::string_view> contributing_texts(std::span<const Token> tokens) {
  if (tokens.empty()) throw EmptyInput("cannot vectorize an empty phrase");
  std::vector<std::string_view> texts;
  std::unordered_set<std::string_view> seen;
  for (const Token &t : tokens) {
    if (!t.stopword && seen.insert(t.text).second) texts.push_back(t.text);
  }
  if (texts.empty()) {
    for (const Token &t : tokens) {
      if (seen.insert(t.text).second) texts.push_back(t.text);
    }
  }
  return texts;
}

WordVector weighted_mean(const VectorStore &store, std::span<const std::string_view> texts,
                         std::optional<std::string_view> head, double k) {
  WordVector sum(store.dimension(), 0.0);
  for (std::string_view text : texts) {
    const WordVector v = store.lookup(text);
    const double w = text == head ? k : 1.0;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * v[i];
  }
  const double n = static_cast<double>(texts.size());
  for (double &x : sum) x /= n;
  return sum;
}

}  // namespace

VectorStore::VectorStore(std::size_t dimension, std::uint64_t oov_seed)
    : dimension_(dimension), oov_seed_(oov_seed) {
  if (dimension == 0) throw FormatError("vector dimension must be positive");
}

VectorStore VectorStore::parse(std::istream &in, std::optional<std::size_t> limit,
                               std::uint64_t oov_seed) {
  std::optional<VectorStore> store;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      std::size_t n = 0, d = 0;
      if (fields.size() == 2 && parse_size(fields[0], n) && parse_size(fields[1], d)) {
        store.emplace(d, oov_seed);
        continue;
      }
    }
    if (fields.size() < 2) {
      throw FormatError("vector file line " + std::to_string(line_no) + ": expected a token and components");
    }
    if (!store) store.emplace(fields.size() - 1, oov_seed);
    if (fields.size() - 1 != store->dimension()) {
      throw FormatError("vector file line " + std::to_string(line_no) + ": expected " +
                        std::to_string(store->dimension()) + " components, found " +
                        std::to_string(fields.size() - 1));
    }
    if (limit && store->size() >= *limit) break;
    WordVector v(store->dimension());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!parse_double(fields[i + 1], v[i]) || !std::isfinite(v[i])) {
        throw FormatError("vector file line " + std::to_string(line_no) + ": bad component '" +
                          std::string(fields[i + 1]) + "'");
      }
    }
    std::string token(fields[0]);
    if (!store->contains(token)) store->add(std::move(token), std::move(v));
  }
  if (!store) throw FormatError("vector file is empty");
  return std::move(*store);
}

VectorStore VectorStore::load(const std::string &path, std::optional<std::size_t> limit,
                              std::uint64_t oov_seed) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vector file '" + path + "'");
  return parse(in, limit, oov_seed);
}

void VectorStore::add(std::string token, WordVector vector) {
  if (vector.size() != dimension_) {
    throw DimensionMismatch("vector for '" + token + "' has dimension " +
                            std::to_string(vector.size()) + ", store has " +
                            std::to_string(dimension_));
  }
  for (double x : vector) {
    if (!std::isfinite(x)) throw FormatError("non-finite component in vector for '" + token + "'");
  }
  entries_.insert_or_assign(std::move(token), std::move(vector));
}

bool VectorStore::contains(std::string_view token) const {
  return entries_.contains(std::string(token));
}

LookupResult VectorStore::lookup_with_path(std::string_view token) const {
  if (auto it = entries_.find(std::string(token)); it != entries_.end()) {
    return {it->second, LookupPath::kExact};
  }
  std::string lower = to_lower(token);
  if (lower != token) {
    if (auto it = entries_.find(lower); it != entries_.end()) {
      return {it->second, LookupPath::kLowercase};
    }
  }
  return {oov_vector(token), LookupPath::kOov};
}

WordVector VectorStore::oov_vector(std::string_view token) const {
  // Case variants share one OOV vector.
  std::uint64_t seed_state = oov_seed_;
  std::uint64_t state = fnv1a(to_lower(token)) ^ splitmix64(seed_state);
  WordVector v(dimension_);
  for (std::size_t i = 0; i < dimension_; i += 2) {
    // Box-Muller; written out so the stream is identical on every platform.
    const double r = std::sqrt(-2.0 * std::log(unit_uniform(state)));
    const double theta = 2.0 * std::numbers::pi * unit_uniform(state);
    v[i] = r * std::cos(theta);
    if (i + 1 < dimension_) v[i + 1] = r * std::sin(theta);
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double &x : v) x /= norm;
  return v;
}

WordVector phrase_mean(const VectorStore &store, std::span<const Token> tokens) {
  const auto texts = contributing_texts(tokens);
  return weighted_mean(store, texts, std::nullopt, 1.0);
}

WordVector weighted_phrase_vector(const VectorStore &store, std::span<const Token> tokens,
                                  std::size_t head_position, double k) {
  const auto texts = contributing_texts(tokens);
  if (head_position >= tokens.size()) {
    throw Error("head position " + std::to_string(head_position) + " outside the phrase");
  }
  if (!(k > 0.0)) throw Error("head weight k must be positive");
  return weighted_mean(store, texts, tokens[head_position].text, k);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine of vectors with dimensions " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / std::sqrt(na * nb);
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace xcoref
