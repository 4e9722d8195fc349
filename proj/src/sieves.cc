#include "xcoref/sieves.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "xcoref/clustering.h"
#include "xcoref/errors.h"
#include "xcoref/preprocessing.h"
#include "xcoref/text.h"
#include "xcoref/type_scoring.h"

namespace xcoref {

namespace {

const std::set<std::string> kArticles = {"a", "an", "the"};

ConceptType type_of(const Chain &c) { return c.concept_type.value_or(ConceptType{}); }

void sort_mentions(Chain &c, const CorpusIndex &index) {
  std::sort(c.mention_ids.begin(), c.mention_ids.end(),
            [&](const std::string &a, const std::string &b) {
              return index.position(a) < index.position(b);
            });
}

// Drops emptied chains and restores corpus order.
void normalize(ChainState &state, const CorpusIndex &index) {
  std::erase_if(state.chains, [](const Chain &c) { return c.mention_ids.empty(); });
  for (Chain &c : state.chains) sort_mentions(c, index);
  std::stable_sort(state.chains.begin(), state.chains.end(), [&](const Chain &a, const Chain &b) {
    return index.position(a.mention_ids.front()) < index.position(b.mention_ids.front());
  });
}

// Moves every mention of `absorbed` into `winner`; the winner keeps its id,
// type and title. The emptied chain is removed by normalize().
void absorb(ChainState &state, Chain &winner, Chain &absorbed, int sieve, std::string rule,
            std::optional<double> score) {
  TraceEvent e;
  e.sieve_id = sieve;
  e.winner = winner.id;
  e.absorbed = absorbed.id;
  e.rule = std::move(rule);
  e.score = score;
  e.winner_type = type_of(winner);
  e.absorbed_type = type_of(absorbed);
  state.trace.push_back(std::move(e));
  winner.mention_ids.insert(winner.mention_ids.end(), absorbed.mention_ids.begin(),
                            absorbed.mention_ids.end());
  absorbed.mention_ids.clear();
  winner.origin = ChainOrigin::kMerged;
}

// Winner first: more mentions, then the smaller id.
bool bigger(const Chain &a, const Chain &b) {
  if (a.mention_ids.size() != b.mention_ids.size()) {
    return a.mention_ids.size() > b.mention_ids.size();
  }
  return a.id < b.id;
}

std::vector<Token> chain_span_tokens(const Chain &c, const CorpusIndex &index) {
  std::vector<Token> out;
  for (const Mention *m : index.mentions_of(c)) {
    auto span = index.span_tokens(*m);
    out.insert(out.end(), span.begin(), span.end());
  }
  return out;
}

std::set<std::string> ne_heads(const Chain &c, const CorpusIndex &index) {
  std::set<std::string> out;
  for (const Mention *m : index.mentions_of(c)) {
    if (m->ne_type) out.insert(to_lower(index.head(*m).text));
  }
  return out;
}

std::set<std::string> ne_compounds(const Chain &c, const CorpusIndex &index) {
  std::set<std::string> out;
  for (const Mention *m : index.mentions_of(c)) {
    if (!m->ne_type) continue;
    for (int t : extract_modifiers(*m).compounds) out.insert(to_lower(index.token(*m, t).text));
  }
  return out;
}

bool intersects(const std::set<std::string> &a, const std::set<std::string> &b) {
  return std::any_of(a.begin(), a.end(), [&](const std::string &x) { return b.contains(x); });
}

bool is_subset(const std::set<std::string> &a, const std::set<std::string> &b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Features of one chain as seen by S3.
struct S3Features {
  std::set<std::string> rep;        // r(c)
  std::set<std::string> modifiers;  // m(c)
  std::set<std::string> tokens;     // lowercased non-stop span tokens
  std::set<std::string> heads;
  WordVector vector;
};

S3Features s3_features(const Chain &c, const SieveContext &ctx) {
  S3Features f;
  f.rep = representative_phrase(c, ctx.index);
  f.modifiers = modifier_phrase(c, ctx.index);
  const auto tokens = chain_span_tokens(c, ctx.index);
  for (const Token &t : tokens) {
    if (!t.stopword) f.tokens.insert(to_lower(t.text));
  }
  for (const Mention *m : ctx.index.mentions_of(c)) f.heads.insert(to_lower(ctx.index.head(*m).text));
  f.vector = phrase_mean(ctx.store, tokens);
  return f;
}

// Capitalized mid-sentence or tagged as a proper noun.
bool looks_named(const Token &t) {
  if (t.pos == "NNP" || t.pos == "NNPS") return true;
  return t.index > 0 && !t.text.empty() && std::isupper(static_cast<unsigned char>(t.text[0]));
}

std::vector<Token> ne_modifier_tokens(const Chain &c, const CorpusIndex &index) {
  std::vector<Token> out;
  for (const Mention *m : index.mentions_of(c)) {
    const Modifiers mods = extract_modifiers(*m);
    for (const auto *list : {&mods.compounds, &mods.adjectival}) {
      for (int t : *list) {
        const Token &tok = index.token(*m, t);
        if (looks_named(tok)) out.push_back(tok);
      }
    }
  }
  return out;
}

std::vector<Token> head_tokens(const Chain &c, const CorpusIndex &index) {
  std::vector<Token> out;
  for (const Mention *m : index.mentions_of(c)) out.push_back(index.head(*m));
  return out;
}

// S5 view of a mention: articles removed, lemmas as token text.
WordVector abstract_vector(const Mention &m, const SieveContext &ctx) {
  std::vector<Token> tokens;
  std::optional<std::size_t> head_pos;
  auto as_lemma = [](Token t) {
    if (!t.lemma.empty()) t.text = t.lemma;
    return t;
  };
  for (const Token &t : ctx.index.span_tokens(m)) {
    if (kArticles.contains(to_lower(t.text))) continue;
    if (t.index == m.head_index) head_pos = tokens.size();
    tokens.push_back(as_lemma(t));
  }
  if (!head_pos) {
    tokens = {as_lemma(ctx.index.head(m))};
    head_pos = 0;
  }
  return weighted_phrase_vector(ctx.store, tokens, *head_pos, ctx.config.k);
}

std::string fresh_id(const std::string &base, std::unordered_set<std::string> &taken) {
  std::string id = base;
  for (int n = 2; taken.contains(id); ++n) id = base + "#" + std::to_string(n);
  taken.insert(id);
  return id;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_partition(const ChainState &state, const CorpusBundle &bundle, const std::string &stage) {
  if (!chain_partition_check(state.chains, bundle.mentions)) {
    throw InvariantViolation("chains no longer partition the mentions after stage " + stage);
  }
}

CorpusBundle with_stopwords(const CorpusBundle &corpus, const std::set<std::string> &words) {
  CorpusBundle out = corpus;
  for (Document &d : out.documents) {
    for (Sentence &s : d.sentences) {
      for (Token &t : s) {
        if (words.contains(to_lower(t.text))) t.stopword = true;
      }
    }
  }
  return out;
}

}  // namespace

ChainState initial_state(const SieveContext &ctx) {
  ChainState state;
  state.chains = split_chains_by_wiki(ctx.index.bundle().initial_chains, ctx.index);
  for (Chain &c : state.chains) {
    c.concept_type = assign_type(score_types(c, ctx.index), c, ctx.index, ctx.config.categories);
  }
  normalize(state, ctx.index);
  return state;
}

void sieve1_nel(ChainState &state, const SieveContext &ctx) {
  const ComparisonMatrix &cm = ctx.config.matrix(1);
  std::map<std::string, std::vector<std::size_t>> by_title;
  for (std::size_t i = 0; i < state.chains.size(); ++i) {
    if (state.chains[i].wiki_title) by_title[*state.chains[i].wiki_title].push_back(i);
  }
  for (auto &[title, members] : by_title) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return bigger(state.chains[a], state.chains[b]);
    });
    Chain &winner = state.chains[members.front()];
    for (std::size_t k = 1; k < members.size(); ++k) {
      Chain &other = state.chains[members[k]];
      if (!comparable(cm, type_of(winner), type_of(other))) continue;
      absorb(state, winner, other, 1, "s1_wiki", std::nullopt);
    }
  }
  normalize(state, ctx.index);
}

void sieve2_ne_heads(ChainState &state, const SieveContext &ctx) {
  const ComparisonMatrix &cm = ctx.config.matrix(2);
  for (;;) {
    const std::size_t n = state.chains.size();
    std::vector<std::set<std::string>> heads(n), compounds(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!type_of(state.chains[i]).is_ne) continue;
      heads[i] = ne_heads(state.chains[i], ctx.index);
      compounds[i] = ne_compounds(state.chains[i], ctx.index);
    }

    struct Candidate {
      std::size_t winner, absorbed;
      const char *rule;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < n; ++i) {
      if (heads[i].empty()) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (heads[j].empty()) continue;
        const Chain &a = state.chains[i];
        const Chain &b = state.chains[j];
        if (!comparable(cm, type_of(a), type_of(b))) continue;
        const char *rule = nullptr;
        if (intersects(heads[i], heads[j])) {
          rule = "s2_head";
        } else if (intersects(heads[i], compounds[j]) || intersects(heads[j], compounds[i])) {
          rule = "s2_compound";
        }
        if (rule == nullptr) continue;
        candidates.push_back(bigger(a, b) ? Candidate{i, j, rule} : Candidate{j, i, rule});
      }
    }
    if (candidates.empty()) break;

    // Smallest absorbed chains first, each into the largest partner.
    auto key = [&](const Candidate &c) {
      const Chain &w = state.chains[c.winner];
      const Chain &a = state.chains[c.absorbed];
      return std::make_tuple(a.mention_ids.size(), a.id, -static_cast<long>(w.mention_ids.size()),
                             w.id);
    };
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate &x, const Candidate &y) { return key(x) < key(y); });
    std::vector<bool> was_absorbed(n, false), was_winner(n, false);
    bool merged = false;
    for (const Candidate &c : candidates) {
      if (was_absorbed[c.absorbed] || was_winner[c.absorbed] || was_absorbed[c.winner]) continue;
      absorb(state, state.chains[c.winner], state.chains[c.absorbed], 2, c.rule, std::nullopt);
      was_absorbed[c.absorbed] = true;
      was_winner[c.winner] = true;
      merged = true;
    }
    normalize(state, ctx.index);
    if (!merged) break;
  }
}

void sieve3_non_ne(ChainState &state, const SieveContext &ctx) {
  const ComparisonMatrix &cm = ctx.config.matrix(3);
  for (;;) {
    const std::size_t n = state.chains.size();
    std::vector<S3Features> features(n);
    for (std::size_t i = 0; i < n; ++i) features[i] = s3_features(state.chains[i], ctx);

    struct Candidate {
      int rule;  // 1..3, lower is stronger
      double cos;
      std::size_t ne;
    };
    std::vector<std::pair<std::size_t, Candidate>> merges;  // (c_nn, best c_ne)
    for (std::size_t nn = 0; nn < n; ++nn) {
      const Chain &c_nn = state.chains[nn];
      if (type_of(c_nn).is_ne) continue;
      const S3Features &f_nn = features[nn];
      std::optional<Candidate> best;
      for (std::size_t ne = 0; ne < n; ++ne) {
        const Chain &c_ne = state.chains[ne];
        if (!type_of(c_ne).is_ne || !comparable(cm, type_of(c_ne), type_of(c_nn))) continue;
        const S3Features &f_ne = features[ne];
        const double cos = cosine(f_ne.vector, f_nn.vector);

        int rule = 0;
        std::set<std::string> shared_rep;
        std::set_intersection(f_nn.rep.begin(), f_nn.rep.end(), f_ne.rep.begin(), f_ne.rep.end(),
                              std::inserter(shared_rep, shared_rep.end()));
        if (f_nn.rep.size() < f_ne.rep.size() && is_subset(f_nn.rep, f_ne.rep) &&
            is_subset(f_nn.modifiers, shared_rep)) {
          rule = 1;
        } else {
          std::set<std::string> shared;
          std::set_intersection(f_nn.tokens.begin(), f_nn.tokens.end(), f_ne.tokens.begin(),
                                f_ne.tokens.end(), std::inserter(shared, shared.end()));
          if (shared.size() >= 2 && intersects(f_nn.heads, shared) && intersects(f_ne.heads, shared)) {
            rule = 2;
          } else if (cos >= ctx.config.t_nn) {
            rule = 3;
          }
        }
        if (rule == 0) continue;
        const Candidate cand{rule, cos, ne};
        auto rank = [&](const Candidate &c) {
          return std::make_tuple(c.rule, -c.cos, state.chains[c.ne].id);
        };
        if (!best || rank(cand) < rank(*best)) best = cand;
      }
      if (best) merges.emplace_back(nn, *best);
    }
    if (merges.empty()) break;

    std::sort(merges.begin(), merges.end(), [&](const auto &a, const auto &b) {
      return state.chains[a.first].id < state.chains[b.first].id;
    });
    for (const auto &[nn, cand] : merges) {
      std::optional<double> score;
      if (cand.rule == 3) score = cand.cos;
      absorb(state, state.chains[cand.ne], state.chains[nn], 3,
             "s3_cond" + std::to_string(cand.rule), score);
    }
    normalize(state, ctx.index);
  }
}

void sieve4_groups(ChainState &state, const SieveContext &ctx) {
  const ComparisonMatrix &cm = ctx.config.matrix(4);

  // (a) Pool mentions of unnamed group chains and re-cluster them.
  const ConceptType group_nn{BaseType::kGroup, false};
  std::vector<std::size_t> pooled_chains;
  if (comparable(cm, group_nn, group_nn)) {
    for (std::size_t i = 0; i < state.chains.size(); ++i) {
      const Chain &c = state.chains[i];
      if (type_of(c).base != BaseType::kGroup) continue;
      const auto ms = ctx.index.mentions_of(c);
      if (std::any_of(ms.begin(), ms.end(), [](const Mention *m) { return m->ne_type.has_value(); })) {
        continue;
      }
      pooled_chains.push_back(i);
    }
  }
  std::vector<std::string> pool;
  std::unordered_map<std::string, std::size_t> source_of;
  for (std::size_t i : pooled_chains) {
    for (const std::string &id : state.chains[i].mention_ids) {
      pool.push_back(id);
      source_of[id] = i;
    }
  }
  std::sort(pool.begin(), pool.end(), [&](const std::string &a, const std::string &b) {
    return ctx.index.position(a) < ctx.index.position(b);
  });

  if (pool.size() >= 2) {
    std::vector<WordVector> vectors;
    for (const std::string &id : pool) {
      const Mention &m = ctx.index.mention(id);
      auto span = ctx.index.span_tokens(m);
      vectors.push_back(phrase_mean(ctx.store, span));
    }
    const CoreClustering clustering = core_cluster(vectors, ctx.config.core);

    std::vector<std::vector<std::string>> groups;
    for (const auto &cluster : clustering.clusters) {
      std::vector<std::string> g;
      for (std::size_t k : cluster) g.push_back(pool[k]);
      groups.push_back(std::move(g));
    }
    for (std::size_t k : clustering.unassigned) groups.push_back({pool[k]});

    std::unordered_set<std::string> taken;
    for (const Chain &c : state.chains) taken.insert(c.id);
    std::vector<Chain> rebuilt;
    for (auto &g : groups) {
      std::sort(g.begin(), g.end(), [&](const std::string &a, const std::string &b) {
        return ctx.index.position(a) < ctx.index.position(b);
      });
      const Chain &first_source = state.chains[source_of.at(g.front())];
      if (first_source.mention_ids == g) {
        rebuilt.push_back(first_source);
        continue;
      }
      Chain c;
      c.id = fresh_id("s4:" + g.front(), taken);
      c.mention_ids = g;
      c.origin = g.size() > 1 ? ChainOrigin::kMerged : ChainOrigin::kSingleton;
      const auto ms = ctx.index.mentions_of(c);
      c.concept_type = ConceptType{BaseType::kGroup, is_ne_majority(ms)};
      if (g.size() > 1) {
        std::vector<std::size_t> sources;
        for (const std::string &id : g) {
          const std::size_t s = source_of.at(id);
          if (std::find(sources.begin(), sources.end(), s) == sources.end()) sources.push_back(s);
        }
        for (std::size_t s : sources) {
          TraceEvent e;
          e.sieve_id = 4;
          e.winner = c.id;
          e.absorbed = state.chains[s].id;
          e.rule = "s4_core";
          e.winner_type = *c.concept_type;
          e.absorbed_type = type_of(state.chains[s]);
          state.trace.push_back(std::move(e));
        }
      }
      rebuilt.push_back(std::move(c));
    }
    for (std::size_t i : pooled_chains) state.chains[i].mention_ids.clear();
    for (Chain &c : rebuilt) state.chains.push_back(std::move(c));
    normalize(state, ctx.index);
  }

  // (b) Attach groups to the country whose head vector matches their named
  // modifiers.
  std::vector<std::size_t> countries;
  std::vector<WordVector> country_vectors;
  for (std::size_t i = 0; i < state.chains.size(); ++i) {
    const ConceptType t = type_of(state.chains[i]);
    if (t.base == BaseType::kCountry && t.is_ne) {
      countries.push_back(i);
      country_vectors.push_back(phrase_mean(ctx.store, head_tokens(state.chains[i], ctx.index)));
    }
  }
  if (countries.empty()) return;
  std::vector<std::pair<std::size_t, std::pair<std::size_t, double>>> merges;
  for (std::size_t g = 0; g < state.chains.size(); ++g) {
    const Chain &c_gr = state.chains[g];
    if (type_of(c_gr).base != BaseType::kGroup) continue;
    const auto mods = ne_modifier_tokens(c_gr, ctx.index);
    if (mods.empty()) continue;
    const WordVector v_gr = phrase_mean(ctx.store, mods);
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t k = 0; k < countries.size(); ++k) {
      const Chain &c_ne = state.chains[countries[k]];
      if (!comparable(cm, type_of(c_ne), type_of(c_gr))) continue;
      const double s = cosine(country_vectors[k], v_gr);
      if (s < ctx.config.t_gr) continue;
      if (!best || s > best->second ||
          (s == best->second && c_ne.id < state.chains[best->first].id)) {
        best = std::make_pair(countries[k], s);
      }
    }
    if (best) merges.emplace_back(g, *best);
  }
  for (const auto &[g, target] : merges) {
    absorb(state, state.chains[target.first], state.chains[g], 4, "s4_country", target.second);
  }
  normalize(state, ctx.index);
}

void sieve5_abstract(ChainState &state, const SieveContext &ctx) {
  const ComparisonMatrix &cm = ctx.config.matrix(5);
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < state.chains.size(); ++i) {
    const ConceptType t = type_of(state.chains[i]);
    if (comparable(cm, t, t)) eligible.push_back(i);
  }

  // One vector per distinct mention string of each chain.
  std::vector<WordVector> vectors;
  std::vector<std::size_t> owner;  // position in `eligible`
  for (std::size_t e = 0; e < eligible.size(); ++e) {
    std::set<std::string> seen;
    for (const Mention *m : ctx.index.mentions_of(state.chains[eligible[e]])) {
      if (!seen.insert(to_lower(ctx.index.span_text(*m))).second) continue;
      vectors.push_back(abstract_vector(*m, ctx));
      owner.push_back(e);
    }
  }
  if (vectors.size() < 2) return;
  const auto labels = hac_average_cosine(vectors, ctx.config.t_cl);

  UnionFind uf(eligible.size());
  std::map<int, std::size_t> first_of_label;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    auto [it, inserted] = first_of_label.emplace(labels[k], owner[k]);
    if (!inserted) uf.unite(it->second, owner[k]);
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t e = 0; e < eligible.size(); ++e) components[uf.find(e)].push_back(eligible[e]);

  for (auto &[root, members] : components) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return bigger(state.chains[a], state.chains[b]);
    });
    std::vector<std::size_t> winners;
    for (std::size_t c : members) {
      auto it = std::find_if(winners.begin(), winners.end(), [&](std::size_t w) {
        return comparable(cm, type_of(state.chains[w]), type_of(state.chains[c]));
      });
      if (it == winners.end()) {
        winners.push_back(c);
      } else {
        absorb(state, state.chains[*it], state.chains[c], 5, "s5_hac", std::nullopt);
      }
    }
  }
  normalize(state, ctx.index);
}

PipelineResult run_pipeline(const CorpusBundle &corpus, const VectorStore &store,
                            const PipelineConfig &config) {
  const CorpusBundle bundle =
      config.stopwords.empty() ? corpus : with_stopwords(corpus, config.stopwords);
  const CorpusIndex index(bundle);
  const SieveContext ctx{index, store, config};

  PipelineResult result;
  std::set<std::string> texts;
  for (const Mention &m : bundle.mentions) {
    for (const Token &t : index.span_tokens(m)) texts.insert(t.text);
  }
  for (const std::string &t : texts) {
    switch (store.lookup_with_path(t).path) {
      case LookupPath::kExact: ++result.lookups.exact; break;
      case LookupPath::kLowercase: ++result.lookups.lowercase; break;
      case LookupPath::kOov: ++result.lookups.oov; break;
    }
  }

  ChainState state = initial_state(ctx);
  check_partition(state, bundle, "init");
  result.stages.push_back({"init", state.chains});

  using Sieve = void (*)(ChainState &, const SieveContext &);
  const std::pair<const char *, Sieve> sieves[] = {
      {"S1", sieve1_nel},     {"S2", sieve2_ne_heads},  {"S3", sieve3_non_ne},
      {"S4", sieve4_groups},  {"S5", sieve5_abstract}};
  for (const auto &[name, sieve] : sieves) {
    sieve(state, ctx);
    check_partition(state, bundle, name);
    result.stages.push_back({name, state.chains});
  }
  result.chains = std::move(state.chains);
  result.trace = std::move(state.trace);
  return result;
}

}  // namespace xcoref
