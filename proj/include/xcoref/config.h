#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "xcoref/clustering.h"
#include "xcoref/type_scoring.h"
#include "xcoref/vector_store.h"

namespace xcoref {

enum class Aggregation { kPooled, kMacro };

std::string_view aggregation_name(Aggregation mode);
// Throws ConfigError on anything but "pooled" / "macro".
Aggregation parse_aggregation(std::string_view name);

// Every knob of a run. The defaults reproduce the shipped configuration, so
// a default-constructed config is a valid one.
struct PipelineConfig {
  double t_nn = 0.5;  // S3 cosine threshold, (0, 1]
  double t_gr = 0.5;  // S4 country-group threshold, (0, 1]
  double t_cl = 0.4;  // S5 cut distance, (0, 2)
  double k = 2.0;     // S5 head weight, > 0
  CoreParams core;    // S4 core detection, each in (0, 1]
  std::uint64_t oov_seed = kDefaultOovSeed;
  std::optional<std::size_t> vector_limit;
  // Index i holds the matrix of sieve i + 1.
  std::array<ComparisonMatrix, 5> matrices{
      ComparisonMatrix::defaults(1), ComparisonMatrix::defaults(2),
      ComparisonMatrix::defaults(3), ComparisonMatrix::defaults(4),
      ComparisonMatrix::defaults(5)};
  CategoryMap categories = CategoryMap::defaults();
  // Lowercased words treated as stopwords on top of the corpus flags.
  std::set<std::string> stopwords;
  Aggregation aggregate = Aggregation::kPooled;

  const ComparisonMatrix &matrix(int sieve_id) const { return matrices.at(sieve_id - 1); }

  // Throws ConfigError when a value is outside its range.
  void validate() const;
};

// Reads a JSON config. Keys: t_nn, t_gr, t_cl, k, s_core, d_min, s_assign,
// oov_seed, vector_limit, matrices ({"1".."5": path}), category_map,
// stopwords (array), aggregate. Missing keys keep their defaults; unknown
// keys are rejected. Relative paths resolve against the config file's
// directory.
PipelineConfig load_config(const std::string &path);
PipelineConfig parse_config(const std::string &json_text, const std::string &base_dir = ".");

// One line per value, stable order; used in run reports.
std::string describe(const PipelineConfig &config);

}  // namespace xcoref
