#include "xcoref/type_scoring.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "xcoref/embedded_data.h"
#include "xcoref/errors.h"
#include "xcoref/text.h"

namespace xcoref {

namespace {

bool is_country_label(std::string_view ne) { return ne == "GPE"; }

// Equal within relative rounding noise.
bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

double sense_weight(int rank) { return 1.0 / static_cast<double>(rank); }

CategoryMap CategoryMap::parse(std::istream &in) {
  CategoryMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = split_whitespace(content);
    if (fields.size() != 2) {
      throw FormatError("category map line " + std::to_string(line_no) + ": expected 'category base'");
    }
    auto base = parse_base_type(fields[1]);
    if (!base) {
      throw FormatError("category map line " + std::to_string(line_no) + ": unknown base type '" +
                        std::string(fields[1]) + "'");
    }
    std::string category(fields[0]);
    if (map.base_.contains(category)) {
      throw FormatError("category map line " + std::to_string(line_no) + ": duplicate category '" +
                        category + "'");
    }
    map.order_.emplace(category, map.order_.size());
    map.base_.emplace(std::move(category), *base);
  }
  return map;
}

CategoryMap CategoryMap::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open category map '" + path + "'");
  return parse(in);
}

const CategoryMap &CategoryMap::defaults() {
  static const CategoryMap map = [] {
    std::istringstream in{std::string(embedded::k_categories_txt)};
    return parse(in);
  }();
  return map;
}

BaseType CategoryMap::base_of(std::string_view category) const {
  auto it = base_.find(std::string(category));
  return it == base_.end() ? BaseType::kMisc : it->second;
}

std::size_t CategoryMap::order_of(std::string_view category) const {
  auto it = order_.find(std::string(category));
  return it == order_.end() ? order_.size() : it->second;
}

int ComparisonMatrix::key(ConceptType t) {
  return static_cast<int>(t.base) * 2 + (t.is_ne ? 0 : 1);
}

void ComparisonMatrix::set(ConceptType x, ConceptType y, bool allowed) {
  entries_[{key(x), key(y)}] = allowed;
  entries_[{key(y), key(x)}] = allowed;
}

bool ComparisonMatrix::has_entry(ConceptType x, ConceptType y) const {
  return entries_.contains({key(x), key(y)});
}

bool ComparisonMatrix::allows(ConceptType x, ConceptType y) const {
  auto it = entries_.find({key(x), key(y)});
  if (it == entries_.end()) {
    throw MissingEntry("comparison matrix for sieve " + std::to_string(sieve_id_) +
                       " has no entry for " + to_string(x) + " x " + to_string(y));
  }
  return it->second;
}

ComparisonMatrix ComparisonMatrix::parse(std::istream &in, int sieve_id) {
  ComparisonMatrix cm(sieve_id);
  std::vector<std::optional<ConceptType>> columns;
  std::map<std::pair<int, int>, bool> raw;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = split_whitespace(content);
    if (!have_header) {
      have_header = true;
      for (std::size_t i = 1; i < fields.size(); ++i) columns.push_back(parse_concept_type(fields[i]));
      continue;
    }
    if (fields.size() != columns.size() + 1) {
      throw FormatError("matrix line " + std::to_string(line_no) + ": expected " +
                        std::to_string(columns.size()) + " cells");
    }
    auto row = parse_concept_type(fields[0]);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      std::string_view cell = fields[i + 1];
      int value = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || value < 0) {
        throw FormatError("matrix line " + std::to_string(line_no) + ": bad cell '" +
                          std::string(cell) + "'");
      }
      if (row && columns[i]) raw[{key(*row), key(*columns[i])}] = value >= 1;
    }
  }
  for (const auto &[pair, allowed] : raw) {
    auto mirror = raw.find({pair.second, pair.first});
    if (mirror != raw.end() && mirror->second != allowed) {
      throw FormatError("comparison matrix for sieve " + std::to_string(sieve_id) +
                        " is not symmetric");
    }
  }
  for (const auto &[pair, allowed] : raw) {
    cm.entries_[pair] = allowed;
    cm.entries_[{pair.second, pair.first}] = allowed;
  }
  return cm;
}

ComparisonMatrix ComparisonMatrix::load(const std::string &path, int sieve_id) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open comparison matrix '" + path + "'");
  return parse(in, sieve_id);
}

const ComparisonMatrix &ComparisonMatrix::defaults(int sieve_id) {
  static const std::array<ComparisonMatrix, 5> matrices = [] {
    const std::array<std::string_view, 5> sources = {
        embedded::k_cm1_tsv, embedded::k_cm2_tsv, embedded::k_cm3_tsv,
        embedded::k_cm4_tsv, embedded::k_cm5_tsv};
    std::array<ComparisonMatrix, 5> out;
    for (int i = 0; i < 5; ++i) {
      std::istringstream in{std::string(sources[i])};
      out[i] = parse(in, i + 1);
    }
    return out;
  }();
  if (sieve_id < 1 || sieve_id > 5) {
    throw Error("no default comparison matrix for sieve " + std::to_string(sieve_id));
  }
  return matrices[sieve_id - 1];
}

TypeScore score_types(std::span<const Mention *const> mentions) {
  TypeScore score;
  for (const Mention *m : mentions) {
    for (const SenseRank &s : m->sense_ranks) score.weights[s.category] += sense_weight(s.rank);
  }
  return score;
}

TypeScore score_types(const Chain &chain, const CorpusIndex &index) {
  const auto mentions = index.mentions_of(chain);
  return score_types(mentions);
}

bool is_ne_majority(std::span<const Mention *const> mentions) {
  if (mentions.empty()) return false;
  std::size_t labeled = 0;
  for (const Mention *m : mentions) labeled += m->ne_type.has_value();
  return 2 * labeled >= mentions.size();
}

ConceptType assign_type(const TypeScore &score, std::span<const Mention *const> mentions,
                        const CategoryMap &categories) {
  ConceptType type{BaseType::kMisc, is_ne_majority(mentions)};
  const std::string *best = nullptr;
  double best_weight = 0.0;
  for (const auto &[category, weight] : score.weights) {
    if (weight <= 0.0) continue;
    bool better = best == nullptr || weight > best_weight;
    if (best != nullptr && nearly_equal(weight, best_weight)) {
      const auto lhs = categories.order_of(category);
      const auto rhs = categories.order_of(*best);
      // std::map iteration is lexicographic, which settles unknown-vs-unknown.
      better = lhs < rhs;
    }
    if (better) {
      best = &category;
      best_weight = weight;
    }
  }
  if (best == nullptr) return type;

  type.base = categories.base_of(*best);
  if (type.base == BaseType::kCountry) {
    bool country_evidence = false;
    for (const Mention *m : mentions) {
      if (m->ne_type && is_country_label(*m->ne_type)) country_evidence = true;
    }
    if (!country_evidence) type.base = BaseType::kMisc;
  }
  return type;
}

ConceptType assign_type(const TypeScore &score, const Chain &chain, const CorpusIndex &index,
                        const CategoryMap &categories) {
  const auto mentions = index.mentions_of(chain);
  return assign_type(score, mentions, categories);
}

bool comparable(const ComparisonMatrix &cm, ConceptType x, ConceptType y) {
  return cm.allows(x, y);
}

}  // namespace xcoref
