#include "xcoref/scoring.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "xcoref/errors.h"
#include "xcoref/text.h"

namespace xcoref {

namespace {

using Int128 = __int128;

// Exact sum of small fractions; falls back to floating point when the
// common denominator grows past what 128 bits hold comfortably.
class FractionSum {
 public:
  void add(long long num, long long den) {
    if (num == 0) return;
    if (inexact_) {
      approx_ += static_cast<long double>(num) / static_cast<long double>(den);
      return;
    }
    const Int128 g = gcd(den_, den);
    const Int128 lcm = den_ / g * den;
    const long double estimate = static_cast<long double>(lcm) *
                                 (1.0L + std::fabs(static_cast<long double>(num_)) +
                                  static_cast<long double>(num));
    if (estimate > 1e33L) {
      inexact_ = true;
      approx_ = static_cast<long double>(num_) / static_cast<long double>(den_) +
                static_cast<long double>(num) / static_cast<long double>(den);
      return;
    }
    num_ = num_ * (lcm / den_) + static_cast<Int128>(num) * (lcm / den);
    den_ = lcm;
    const Int128 r = gcd(num_ < 0 ? -num_ : num_, den_);
    if (r > 1) {
      num_ /= r;
      den_ /= r;
    }
  }

  double value() const {
    if (inexact_) return static_cast<double>(approx_);
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

 private:
  static Int128 gcd(Int128 a, Int128 b) {
    while (b != 0) {
      Int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  Int128 num_ = 0;
  Int128 den_ = 1;
  bool inexact_ = false;
  long double approx_ = 0.0L;
};

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

// |a_i ∩ b_j| for every pair with a non-empty overlap, per row of `a`.
std::vector<std::map<int, long long>> overlaps(const ChainSet &a, const ChainSet &b) {
  std::vector<std::map<int, long long>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const MentionKey &k : a.chains()[i]) {
      const int j = b.chain_of(k);
      if (j >= 0) ++out[i][j];
    }
  }
  return out;
}

// Vilain et al. link recall of `key` against `response`.
double muc_side(const ChainSet &key, const ChainSet &response) {
  long long num = 0, den = 0;
  for (const auto &chain : key.chains()) {
    if (chain.size() < 2) continue;
    std::set<int> parts;
    long long missing = 0;
    for (const MentionKey &k : chain) {
      const int j = response.chain_of(k);
      if (j >= 0) {
        parts.insert(j);
      } else {
        ++missing;
      }
    }
    const long long partitions = static_cast<long long>(parts.size()) + missing;
    num += static_cast<long long>(chain.size()) - partitions;
    den += static_cast<long long>(chain.size()) - 1;
  }
  return safe_div(static_cast<double>(num), static_cast<double>(den));
}

double b_cubed_side(const ChainSet &key, const ChainSet &response) {
  if (key.mention_count() == 0) return 0.0;
  const auto overlap = overlaps(key, response);
  double sum = 0.0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    double chain_sum = 0.0;
    for (const auto &[j, n] : overlap[i]) chain_sum += static_cast<double>(n * n);
    sum += chain_sum / static_cast<double>(key.chains()[i].size());
  }
  return sum / static_cast<double>(key.mention_count());
}

}  // namespace

std::string to_string(const MentionKey &key) {
  return key.doc_id + ":" + std::to_string(key.sent_index) + ":" + std::to_string(key.start) +
         "-" + std::to_string(key.end);
}

ChainSet::ChainSet(std::vector<std::vector<MentionKey>> chains) {
  for (auto &chain : chains) {
    if (chain.empty()) continue;
    std::sort(chain.begin(), chain.end());
    chains_.push_back(std::move(chain));
  }
  std::sort(chains_.begin(), chains_.end(),
            [](const auto &a, const auto &b) { return a.front() < b.front(); });
  for (std::size_t i = 0; i < chains_.size(); ++i) {
    for (const MentionKey &k : chains_[i]) {
      if (!chain_of_.emplace(k, static_cast<int>(i)).second) {
        throw DuplicateMention("mention " + to_string(k) + " appears more than once");
      }
    }
  }
}

int ChainSet::chain_of(const MentionKey &key) const {
  auto it = chain_of_.find(key);
  return it == chain_of_.end() ? -1 : it->second;
}

MetricResult MetricResult::from(double recall, double precision) {
  MetricResult r;
  r.recall = recall;
  r.precision = precision;
  r.f1 = recall + precision > 0.0 ? 2.0 * recall * precision / (recall + precision) : 0.0;
  return r;
}

std::pair<ChainSet, ChainSet> align(const ChainSet &gold, const ChainSet &system) {
  // Both sides were validated for duplicates on construction; exact key
  // equality is the only matching rule.
  return {gold, system};
}

MetricResult muc(const ChainSet &gold, const ChainSet &system) {
  return MetricResult::from(muc_side(gold, system), muc_side(system, gold));
}

MetricResult b_cubed(const ChainSet &gold, const ChainSet &system) {
  return MetricResult::from(b_cubed_side(gold, system), b_cubed_side(system, gold));
}

MetricResult ceaf_e(const ChainSet &gold, const ChainSet &system) {
  if (gold.size() == 0 || system.size() == 0) return MetricResult::from(0.0, 0.0);
  const auto overlap = overlaps(gold, system);
  std::vector<std::vector<double>> phi(gold.size(), std::vector<double>(system.size(), 0.0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const auto &[j, n] : overlap[i]) {
      phi[i][j] = 2.0 * static_cast<double>(n) /
                  static_cast<double>(gold.chains()[i].size() + system.chains()[j].size());
    }
  }
  const auto match = max_weight_assignment(phi);
  FractionSum total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (match[i] < 0) continue;
    auto it = overlap[i].find(match[i]);
    if (it == overlap[i].end()) continue;
    total.add(2 * it->second, static_cast<long long>(gold.chains()[i].size() +
                                                     system.chains()[match[i]].size()));
  }
  const double sum = total.value();
  return MetricResult::from(sum / static_cast<double>(gold.size()),
                            sum / static_cast<double>(system.size()));
}

double conll_f1(const MetricResult &muc, const MetricResult &b_cubed, const MetricResult &ceaf_e) {
  return (muc.f1 + b_cubed.f1 + ceaf_e.f1) / 3.0;
}

ConllScores score_all(const ChainSet &gold, const ChainSet &system) {
  ConllScores s;
  s.muc = muc(gold, system);
  s.b_cubed = b_cubed(gold, system);
  s.ceaf_e = ceaf_e(gold, system);
  s.conll_f1 = conll_f1(s.muc, s.b_cubed, s.ceaf_e);
  return s;
}

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>> &weights) {
  const std::size_t rows = weights.size();
  if (rows == 0) return {};
  const std::size_t cols = weights.front().size();
  const std::size_t n = std::max(rows, cols);
  double max_w = 0.0;
  for (const auto &row : weights) {
    for (double w : row) max_w = std::max(max_w, w);
  }
  // Minimum-cost form on a square matrix; padding cells cost max_w.
  auto cost = [&](std::size_t i, std::size_t j) {
    if (i < rows && j < cols) return max_w - weights[i][j];
    return max_w;
  };

  // Shortest augmenting path with potentials; 1-based as in the classic
  // formulation, column 0 is the virtual source.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> match(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j];
    if (i >= 1 && i <= rows && j <= cols) match[i - 1] = static_cast<int>(j - 1);
  }
  return match;
}

void write_conll(const ChainSet &chains, std::ostream &out,
                 const SentenceLengths &sentence_lengths) {
  // doc -> sentence -> token count
  std::map<std::string, std::vector<int>> lengths;
  for (const auto &[doc, lens] : sentence_lengths) lengths[doc] = lens;
  struct Bracket {
    int chain;
    int start;
    int end;
  };
  std::map<std::string, std::map<int, std::map<int, std::vector<Bracket>>>> by_token;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (const MentionKey &k : chains.chains()[c]) {
      auto &lens = lengths[k.doc_id];
      if (static_cast<int>(lens.size()) <= k.sent_index) lens.resize(k.sent_index + 1, 0);
      lens[k.sent_index] = std::max(lens[k.sent_index], k.end + 1);
      const Bracket b{static_cast<int>(c), k.start, k.end};
      by_token[k.doc_id][k.sent_index][k.start].push_back(b);
      if (k.end != k.start) by_token[k.doc_id][k.sent_index][k.end].push_back(b);
    }
  }

  for (const auto &[doc, lens] : lengths) {
    out << "#begin document (" << doc << "); part 000\n";
    for (std::size_t s = 0; s < lens.size(); ++s) {
      const int len = std::max(lens[s], 1);
      for (int t = 0; t < len; ++t) {
        std::vector<std::string> closes, opens, singles;
        std::vector<Bracket> opening;
        auto doc_it = by_token.find(doc);
        if (doc_it != by_token.end()) {
          auto sent_it = doc_it->second.find(static_cast<int>(s));
          if (sent_it != doc_it->second.end()) {
            auto tok_it = sent_it->second.find(t);
            if (tok_it != sent_it->second.end()) {
              for (const Bracket &b : tok_it->second) {
                const std::string id = std::to_string(b.chain);
                if (b.start == t && b.end == t) {
                  singles.push_back("(" + id + ")");
                } else if (b.end == t) {
                  closes.push_back(id + ")");
                } else {
                  opening.push_back(b);
                }
              }
            }
          }
        }
        // Longer spans open first so same-chain nested spans close innermost
        // first.
        std::sort(opening.begin(), opening.end(), [](const Bracket &a, const Bracket &b) {
          if (a.end != b.end) return a.end > b.end;
          return a.chain < b.chain;
        });
        for (const Bracket &b : opening) opens.push_back("(" + std::to_string(b.chain));
        std::string column;
        for (const auto *part : {&closes, &opens, &singles}) {
          for (const std::string &item : *part) {
            if (!column.empty()) column += '|';
            column += item;
          }
        }
        if (column.empty()) column = "-";
        out << doc << "\t0\t" << t << "\t-\t" << column << '\n';
      }
      out << '\n';
    }
    out << "#end document\n";
  }
}

ChainSet read_conll(std::istream &in) {
  std::map<std::string, std::vector<MentionKey>> chains;
  std::map<std::string, std::vector<int>> open;  // chain id -> open starts
  std::string doc;
  bool in_doc = false;
  int sent = 0;
  int token = 0;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string &msg) {
    throw FormatError("CoNLL line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view content = trim(line);
    if (content.starts_with("#begin document")) {
      const auto lp = content.find('(');
      const auto rp = content.rfind(')');
      if (lp == std::string_view::npos || rp == std::string_view::npos || rp < lp) {
        fail("malformed document header");
      }
      doc = std::string(content.substr(lp + 1, rp - lp - 1));
      in_doc = true;
      sent = 0;
      token = 0;
      continue;
    }
    if (content.starts_with("#end document")) {
      for (const auto &[id, starts] : open) {
        if (!starts.empty()) fail("unclosed mention of chain " + id);
      }
      in_doc = false;
      continue;
    }
    if (content.empty()) {
      if (token > 0) {
        ++sent;
        token = 0;
      }
      continue;
    }
    if (!in_doc) fail("token line outside a document");
    auto fields = split_whitespace(content);
    std::string_view column = fields.back();
    if (column != "-") {
      std::size_t pos = 0;
      while (pos <= column.size()) {
        std::size_t bar = column.find('|', pos);
        if (bar == std::string_view::npos) bar = column.size();
        std::string_view item = column.substr(pos, bar - pos);
        pos = bar + 1;
        if (item.empty()) fail("empty coreference item");
        const bool opens = item.front() == '(';
        const bool closes = item.back() == ')';
        std::string id(item.substr(opens ? 1 : 0, item.size() - (opens ? 1 : 0) - (closes ? 1 : 0)));
        if (id.empty()) fail("coreference item without a chain id");
        if (opens && closes) {
          chains[id].push_back({doc, sent, token, token});
        } else if (opens) {
          open[id].push_back(token);
        } else if (closes) {
          auto &starts = open[id];
          if (starts.empty()) fail("closing bracket without opening for chain " + id);
          chains[id].push_back({doc, sent, starts.back(), token});
          starts.pop_back();
        } else {
          fail("coreference item '" + std::string(item) + "' has no bracket");
        }
      }
    }
    ++token;
  }
  std::vector<std::vector<MentionKey>> out;
  for (auto &[id, keys] : chains) out.push_back(std::move(keys));
  return ChainSet(std::move(out));
}

}  // namespace xcoref
