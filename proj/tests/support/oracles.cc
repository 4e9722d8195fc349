#include "oracles.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace xcoref::testing {

std::vector<int> naive_hac(const std::vector<WordVector> &vectors, double threshold) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) d[i][j] = 1.0 - cosine(vectors[i], vectors[j]);
    }
  }
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};

  auto linkage = [&](const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
    double sum = 0.0;
    for (std::size_t x : a) {
      for (std::size_t y : b) sum += d[x][y];
    }
    return sum / static_cast<double>(a.size() * b.size());
  };

  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    // Clusters stay sorted by smallest member, so scanning i < j in order
    // visits representative pairs in lexicographic order.
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double l = linkage(clusters[i], clusters[j]);
        if (l < best) {
          best = l;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > threshold) break;
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<long>(bj));
  }

  std::vector<int> labels(n, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t x : clusters[c]) labels[x] = static_cast<int>(c);
  }
  return labels;
}

namespace {

struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction operator+(const Fraction &o) const {
    const long long l = std::lcm(den, o.den);
    Fraction r{num * (l / den) + o.num * (l / o.den), l};
    const long long g = std::gcd(r.num, r.den);
    if (g > 1) {
      r.num /= g;
      r.den /= g;
    }
    return r;
  }
  bool operator<(const Fraction &o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
  }
};

void enumerate(const std::vector<std::vector<Fraction>> &phi, std::size_t row,
               std::vector<bool> &used, Fraction acc, Fraction &best) {
  if (row == phi.size()) {
    if (best < acc) best = acc;
    return;
  }
  for (std::size_t c = 0; c < used.size(); ++c) {
    if (used[c]) continue;
    used[c] = true;
    enumerate(phi, row + 1, used, acc + phi[row][c], best);
    used[c] = false;
  }
}

}  // namespace

MetricResult brute_force_ceaf_e(const ChainSet &gold, const ChainSet &system) {
  if (gold.size() == 0 || system.size() == 0) return MetricResult::from(0.0, 0.0);
  const bool gold_rows = gold.size() <= system.size();
  const ChainSet &rows = gold_rows ? gold : system;
  const ChainSet &cols = gold_rows ? system : gold;
  std::vector<std::vector<Fraction>> phi(rows.size(), std::vector<Fraction>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      long long common = 0;
      for (const MentionKey &k : rows.chains()[i]) common += cols.chain_of(k) == static_cast<int>(j);
      phi[i][j] = Fraction{0, 1} + Fraction{2 * common, static_cast<long long>(rows.chains()[i].size() +
                                                                             cols.chains()[j].size())};
    }
  }
  std::vector<bool> used(cols.size(), false);
  Fraction best;
  enumerate(phi, 0, used, Fraction{}, best);
  const double total = static_cast<double>(best.num) / static_cast<double>(best.den);
  return MetricResult::from(total / static_cast<double>(gold.size()),
                            total / static_cast<double>(system.size()));
}

bool same_partition(const std::vector<int> &a, const std::vector<int> &b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [x, inserted_x] = ab.emplace(a[i], b[i]);
    auto [y, inserted_y] = ba.emplace(b[i], a[i]);
    if (x->second != b[i] || y->second != a[i]) return false;
  }
  return true;
}

}  // namespace xcoref::testing
