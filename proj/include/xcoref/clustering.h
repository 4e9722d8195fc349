#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xcoref/vector_store.h"

namespace xcoref {

// Symmetric n x n matrix of cosine distances (1 - cosine), zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::span<const WordVector> vectors);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

// One agglomeration step. Clusters are named by their smallest member index.
struct Merge {
  std::size_t left = 0;   // smaller representative
  std::size_t right = 0;  // larger representative, absorbed
  double distance = 0.0;
  std::size_t size = 0;   // size of the merged cluster
};

// Average-linkage agglomeration down to a single cluster. Among equally close
// pairs, the one with the smallest (left, right) representatives merges first.
std::vector<Merge> hac_average_dendrogram(std::span<const WordVector> vectors);

// Cuts the dendrogram: merges happen while the closest pair is at distance
// <= threshold. Labels are contiguous from 0 in order of each cluster's
// smallest member. Throws DimensionMismatch.
std::vector<int> hac_average_cosine(std::span<const WordVector> vectors, double threshold);

// Labels from a dendrogram of n items, keeping merges with distance <= threshold.
std::vector<int> cut_dendrogram(std::span<const Merge> merges, std::size_t n, double threshold);

struct CoreParams {
  double s_core = 0.6;    // edge threshold inside a core
  double d_min = 0.3;     // minimum normalized degree of a core member
  double s_assign = 0.5;  // similarity needed to attach to a core
};

struct CoreClustering {
  // Each cluster lists its core members first (ascending), then attached
  // items (ascending).
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> core_sizes;
  std::vector<std::size_t> unassigned;
};

// Core detection in the similarity graph, then attachment of the remaining
// items to the most similar core. See the README for the exact procedure.
CoreClustering core_cluster(std::span<const WordVector> vectors, const CoreParams &params);

}  // namespace xcoref
