#include "xcoref/clustering.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "xcoref/errors.h"

namespace xcoref {

namespace {

void check_dimensions(std::span<const WordVector> vectors) {
  for (const WordVector &v : vectors) {
    if (v.size() != vectors.front().size()) {
      throw DimensionMismatch("clustering input mixes vector dimensions");
    }
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

DistanceMatrix::DistanceMatrix(std::span<const WordVector> vectors)
    : n_(vectors.size()), d_(vectors.size() * vectors.size(), 0.0) {
  check_dimensions(vectors);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double d = 1.0 - cosine(vectors[i], vectors[j]);
      d_[i * n_ + j] = d;
      d_[j * n_ + i] = d;
    }
  }
}

std::vector<Merge> hac_average_dendrogram(std::span<const WordVector> vectors) {
  const std::size_t n = vectors.size();
  std::vector<Merge> merges;
  if (n < 2) {
    check_dimensions(vectors);
    return merges;
  }
  const DistanceMatrix initial(vectors);
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = initial(i, j);
  }
  auto at = [&](std::size_t i, std::size_t j) -> double & { return d[i * n + j]; };

  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> nn(n, 0);
  std::vector<double> nn_dist(n, std::numeric_limits<double>::infinity());

  // Nearest active neighbour of i, smallest index among equals.
  auto refresh = [&](std::size_t i) {
    nn_dist[i] = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (at(i, j) < nn_dist[i]) {
        nn_dist[i] = at(i, j);
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = 0, b = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const std::size_t lo = std::min(i, nn[i]);
      const std::size_t hi = std::max(i, nn[i]);
      if (!found || std::tie(nn_dist[i], lo, hi) < std::tie(best, a, b)) {
        best = nn_dist[i];
        a = lo;
        b = hi;
        found = true;
      }
    }

    // Lance-Williams update for average linkage (UPGMA).
    const double wa = static_cast<double>(size[a]);
    const double wb = static_cast<double>(size[b]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double merged = (wa * at(a, k) + wb * at(b, k)) / (wa + wb);
      at(a, k) = merged;
      at(k, a) = merged;
    }
    active[b] = false;
    size[a] += size[b];
    merges.push_back({a, b, best, size[a]});

    refresh(a);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      if (nn[k] == a || nn[k] == b) {
        refresh(k);
      } else if (at(k, a) < nn_dist[k] || (at(k, a) == nn_dist[k] && a < nn[k])) {
        nn_dist[k] = at(k, a);
        nn[k] = a;
      }
    }
  }
  return merges;
}

std::vector<int> cut_dendrogram(std::span<const Merge> merges, std::size_t n, double threshold) {
  DisjointSets sets(n);
  for (const Merge &m : merges) {
    if (m.distance > threshold) break;
    sets.unite(m.left, m.right);
  }
  std::vector<int> labels(n, -1);
  std::vector<int> label_of_root(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (label_of_root[root] < 0) label_of_root[root] = next++;
    labels[i] = label_of_root[root];
  }
  return labels;
}

std::vector<int> hac_average_cosine(std::span<const WordVector> vectors, double threshold) {
  const auto merges = hac_average_dendrogram(vectors);
  return cut_dendrogram(merges, vectors.size(), threshold);
}

CoreClustering core_cluster(std::span<const WordVector> vectors, const CoreParams &params) {
  check_dimensions(vectors);
  const std::size_t n = vectors.size();
  CoreClustering result;
  if (n == 0) return result;

  std::vector<double> sim(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = cosine(vectors[i], vectors[j]);
      sim[i * n + j] = s;
      sim[j * n + i] = s;
    }
  }
  auto similar = [&](std::size_t i, std::size_t j) { return sim[i * n + j]; };
  auto linked = [&](std::size_t i, std::size_t j) {
    return i != j && similar(i, j) >= params.s_core;
  };

  std::vector<std::size_t> degree(n, 0);
  std::vector<double> strength(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (linked(i, j)) {
        ++degree[i];
        strength[i] += similar(i, j);
      }
    }
  }

  // Seeds and growth candidates: sufficiently connected items, most connected
  // first. Total similarity breaks degree ties so the order does not depend
  // on input positions.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (n > 1 && static_cast<double>(degree[i]) / static_cast<double>(n - 1) >= params.d_min) {
      order.push_back(i);
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    if (strength[a] != strength[b]) return strength[a] > strength[b];
    return a < b;
  });

  std::vector<bool> in_core(n, false);
  std::vector<std::vector<std::size_t>> cores;
  for (std::size_t seed : order) {
    if (in_core[seed]) continue;
    std::vector<std::size_t> core{seed};
    for (std::size_t cand : order) {
      if (cand == seed || in_core[cand] || !linked(seed, cand)) continue;
      const bool clique = std::all_of(core.begin(), core.end(),
                                      [&](std::size_t m) { return linked(m, cand); });
      if (clique) core.push_back(cand);
    }
    if (core.size() < 2) continue;
    for (std::size_t m : core) in_core[m] = true;
    std::sort(core.begin(), core.end());
    cores.push_back(std::move(core));
  }

  std::vector<std::vector<std::size_t>> attached(cores.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (in_core[i]) continue;
    std::size_t best_core = cores.size();
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cores.size(); ++c) {
      double s = -std::numeric_limits<double>::infinity();
      for (std::size_t m : cores[c]) s = std::max(s, similar(i, m));
      if (s > best_sim) {
        best_sim = s;
        best_core = c;
      }
    }
    if (best_core < cores.size() && best_sim >= params.s_assign) {
      attached[best_core].push_back(i);
    } else {
      result.unassigned.push_back(i);
    }
  }

  for (std::size_t c = 0; c < cores.size(); ++c) {
    std::vector<std::size_t> cluster = cores[c];
    result.core_sizes.push_back(cluster.size());
    cluster.insert(cluster.end(), attached[c].begin(), attached[c].end());
    result.clusters.push_back(std::move(cluster));
  }
  return result;
}

}  // namespace xcoref
