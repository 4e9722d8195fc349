#include "xcoref/cli.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xcoref/baseline.h"
#include "xcoref/chains_io.h"
#include "xcoref/errors.h"
#include "xcoref/sieves.h"

namespace xcoref {

namespace {

struct Options {
  std::vector<std::string> corpora;
  std::string vectors;
  std::string config;
  std::string out;
  std::string trace;
  std::vector<std::string> gold;
  std::string system;
  std::string aggregate;
  std::string conll_dir;
  std::string report;
  int jobs = 1;
};

struct TopicRun {
  CorpusBundle corpus;
  PipelineResult result;
};

PipelineConfig resolve_config(const Options &opt) {
  PipelineConfig cfg;
  if (!opt.config.empty()) {
    cfg = load_config(opt.config);
  } else if (const char *env = std::getenv("XCOREF_CONFIG"); env != nullptr && *env != '\0') {
    cfg = load_config(env);
  }
  if (!opt.aggregate.empty()) cfg.aggregate = parse_aggregation(opt.aggregate);
  return cfg;
}

std::vector<CorpusBundle> load_corpora(const std::vector<std::string> &paths) {
  std::vector<CorpusBundle> out;
  for (const std::string &p : paths) out.push_back(load_corpus(p));
  return out;
}

// Runs the pipeline per topic, up to `jobs` topics at a time. Results keep
// the input order.
std::vector<TopicRun> run_topics(std::vector<CorpusBundle> corpora, const VectorStore &store,
                                 const PipelineConfig &config, int jobs) {
  std::vector<TopicRun> runs(corpora.size());
  for (std::size_t i = 0; i < corpora.size(); ++i) runs[i].corpus = std::move(corpora[i]);
  const std::size_t batch = static_cast<std::size_t>(std::max(jobs, 1));
  for (std::size_t start = 0; start < runs.size(); start += batch) {
    const std::size_t end = std::min(runs.size(), start + batch);
    if (end - start == 1) {
      runs[start].result = run_pipeline(runs[start].corpus, store, config);
      continue;
    }
    std::vector<std::future<PipelineResult>> pending;
    for (std::size_t i = start; i < end; ++i) {
      pending.push_back(std::async(std::launch::async, [&, i] {
        return run_pipeline(runs[i].corpus, store, config);
      }));
    }
    for (std::size_t i = start; i < end; ++i) runs[i].result = pending[i - start].get();
  }
  return runs;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

void write_outputs(const std::vector<TopicRun> &runs, const std::string &out_path,
                   const std::string &trace_path) {
  std::vector<TopicChains> topics;
  for (const TopicRun &r : runs) topics.push_back({r.corpus.topic_id, r.result.chains, &r.corpus});
  std::optional<std::string> trace;
  if (!trace_path.empty()) {
    trace = trace_path;
    auto t = open_output(trace_path);
    for (const TopicRun &r : runs) write_trace_jsonl(r.corpus.topic_id, r.result.trace, t);
  }
  if (!out_path.empty()) {
    auto o = open_output(out_path);
    write_chains_json(topics, trace, o);
  }
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void print_scores(std::ostream &out, const ConllScores &s) {
  out << "metric    R      P      F1\n";
  auto row = [&](const char *name, const MetricResult &m) {
    out << std::left << std::setw(10) << name << fixed(m.recall, 3) << "  " << fixed(m.precision, 3)
        << "  " << fixed(m.f1, 3) << '\n';
  };
  row("MUC", s.muc);
  row("B3", s.b_cubed);
  row("CEAF_e", s.ceaf_e);
  out << "F1_CoNLL " << fixed(s.conll_f1, 3) << '\n';
}

// Percentages with one decimal, one row per method.
void print_table(std::ostream &out, const std::vector<std::pair<std::string, ConllScores>> &rows) {
  out << std::left << std::setw(10) << "Method" << "|        MUC        |        B3         |"
      << "      CEAF_e       | F1_CoNLL\n";
  out << std::setw(10) << "" << "|  R     P     F1   |  R     P     F1   |  R     P     F1   |\n";
  for (const auto &[name, s] : rows) {
    out << std::left << std::setw(10) << name << "|";
    for (const MetricResult *m : {&s.muc, &s.b_cubed, &s.ceaf_e}) {
      for (double v : {m->recall, m->precision, m->f1}) {
        out << std::right << std::setw(5) << fixed(100.0 * v, 1) << " ";
      }
      out << "|";
    }
    out << std::right << std::setw(6) << fixed(100.0 * s.conll_f1, 1) << '\n';
  }
}

nlohmann::ordered_json scores_json(const ConllScores &s) {
  auto metric = [](const MetricResult &m) {
    return nlohmann::ordered_json{{"recall", m.recall}, {"precision", m.precision}, {"f1", m.f1}};
  };
  return {{"muc", metric(s.muc)},
          {"b_cubed", metric(s.b_cubed)},
          {"ceaf_e", metric(s.ceaf_e)},
          {"conll_f1", s.conll_f1}};
}

void print_run_summary(std::ostream &out, const std::vector<TopicRun> &runs) {
  for (const TopicRun &r : runs) {
    std::size_t singletons = 0;
    for (const Chain &c : r.result.chains) singletons += c.mention_ids.size() == 1;
    out << "topic " << r.corpus.topic_id << ": " << r.corpus.mentions.size() << " mentions, "
        << r.result.chains.size() << " chains (" << singletons << " singletons), "
        << r.result.trace.size() << " merges; vector lookups exact=" << r.result.lookups.exact
        << " lowercase=" << r.result.lookups.lowercase << " oov=" << r.result.lookups.oov << '\n';
  }
}

int cmd_run(const Options &opt, std::ostream &out) {
  const PipelineConfig config = resolve_config(opt);
  const VectorStore store = VectorStore::load(opt.vectors, config.vector_limit, config.oov_seed);
  auto runs = run_topics(load_corpora(opt.corpora), store, config, opt.jobs);
  write_outputs(runs, opt.out, opt.trace);
  print_run_summary(out, runs);
  return kExitOk;
}

int cmd_baseline(const Options &opt, std::ostream &out) {
  const auto corpora = load_corpora(opt.corpora);
  std::vector<std::vector<Chain>> chains;
  std::vector<TopicChains> topics;
  for (const CorpusBundle &c : corpora) chains.push_back(lemma_baseline(c));
  for (std::size_t i = 0; i < corpora.size(); ++i) {
    topics.push_back({corpora[i].topic_id, chains[i], &corpora[i]});
    out << "topic " << corpora[i].topic_id << ": " << chains[i].size() << " lemma chains\n";
  }
  if (!opt.out.empty()) {
    auto o = open_output(opt.out);
    write_chains_json(topics, std::nullopt, o);
  }
  return kExitOk;
}

int cmd_score(const Options &opt, std::ostream &out) {
  const PipelineConfig config = resolve_config(opt);
  std::map<std::string, ChainSet> gold;
  for (const CorpusBundle &c : load_corpora(opt.gold)) gold.emplace(c.topic_id, gold_chain_set(c));
  std::ifstream in(opt.system);
  if (!in) throw Error("cannot open system chains file '" + opt.system + "'");
  const auto system = read_chains_json(in);

  std::vector<std::pair<ChainSet, ChainSet>> pairs;
  if (config.aggregate == Aggregation::kMacro) {
    for (const auto &[topic, chains] : system) {
      auto it = gold.find(topic);
      if (it == gold.end()) throw Error("no gold corpus for system topic '" + topic + "'");
      pairs.emplace_back(it->second, chains);
    }
  } else {
    // Pool everything; document ids keep topics apart.
    std::vector<std::vector<MentionKey>> g, s;
    for (const auto &[topic, chains] : gold) g.insert(g.end(), chains.chains().begin(), chains.chains().end());
    for (const auto &[topic, chains] : system) {
      s.insert(s.end(), chains.chains().begin(), chains.chains().end());
    }
    pairs.emplace_back(ChainSet(std::move(g)), ChainSet(std::move(s)));
  }
  print_scores(out, aggregate_scores(pairs, config.aggregate));
  return kExitOk;
}

int cmd_all(const Options &opt, std::ostream &out) {
  const PipelineConfig config = resolve_config(opt);
  const VectorStore store = VectorStore::load(opt.vectors, config.vector_limit, config.oov_seed);
  auto runs = run_topics(load_corpora(opt.corpora), store, config, opt.jobs);
  write_outputs(runs, opt.out, opt.trace);

  std::vector<std::pair<ChainSet, ChainSet>> lemma_pairs, xcoref_pairs;
  std::map<std::string, std::vector<std::pair<ChainSet, ChainSet>>> stage_pairs;
  std::vector<std::string> stage_names;
  nlohmann::ordered_json per_topic = nlohmann::ordered_json::array();
  for (const TopicRun &r : runs) {
    const CorpusIndex index(r.corpus);
    const ChainSet gold = gold_chain_set(r.corpus);
    const auto lemma_chains = lemma_baseline(r.corpus);
    const ChainSet lemma = to_chain_set(lemma_chains, index);
    const ChainSet xcoref = to_chain_set(r.result.chains, index);
    lemma_pairs.emplace_back(gold, lemma);
    xcoref_pairs.emplace_back(gold, xcoref);
    for (const StageSnapshot &s : r.result.stages) {
      if (!stage_pairs.contains(s.name)) stage_names.push_back(s.name);
      stage_pairs[s.name].emplace_back(gold, to_chain_set(s.chains, index));
    }
    std::size_t singletons = 0;
    for (const Chain &c : r.result.chains) singletons += c.mention_ids.size() == 1;
    per_topic.push_back({{"topic", r.corpus.topic_id},
                         {"lemma", scores_json(score_all(gold, lemma))},
                         {"xcoref", scores_json(score_all(gold, xcoref))},
                         {"chains", r.result.chains.size()},
                         {"singletons", singletons}});

    if (!opt.conll_dir.empty()) {
      std::filesystem::create_directories(opt.conll_dir);
      const auto lengths = sentence_lengths(r.corpus);
      const std::filesystem::path dir(opt.conll_dir);
      const std::pair<const char *, const ChainSet *> files[] = {
          {".gold.conll", &gold}, {".xcoref.conll", &xcoref}, {".lemma.conll", &lemma}};
      for (const auto &[suffix, set] : files) {
        auto o = open_output((dir / (r.corpus.topic_id + suffix)).string());
        write_conll(*set, o, lengths);
      }
    }
  }

  const ConllScores lemma = aggregate_scores(lemma_pairs, config.aggregate);
  const ConllScores xcoref = aggregate_scores(xcoref_pairs, config.aggregate);
  print_table(out, {{"Lemma", lemma}, {"XCoref", xcoref}});
  out << "\nSieve progression (F1_CoNLL, " << aggregation_name(config.aggregate) << ")\n";
  nlohmann::ordered_json progression = nlohmann::ordered_json::array();
  for (const std::string &name : stage_names) {
    const ConllScores s = aggregate_scores(stage_pairs[name], config.aggregate);
    out << std::left << std::setw(10) << name << std::right << std::setw(6)
        << fixed(100.0 * s.conll_f1, 1) << '\n';
    progression.push_back({{"stage", name}, {"conll_f1", s.conll_f1}});
  }

  if (!opt.report.empty()) {
    nlohmann::ordered_json report;
    report["aggregate"] = aggregation_name(config.aggregate);
    report["config"] = describe(config);
    report["trace"] = opt.trace.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(opt.trace);
    report["lemma"] = scores_json(lemma);
    report["xcoref"] = scores_json(xcoref);
    report["progression"] = std::move(progression);
    report["topics"] = std::move(per_topic);
    auto o = open_output(opt.report);
    o << report.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

ConllScores aggregate_scores(std::span<const std::pair<ChainSet, ChainSet>> topics,
                             Aggregation mode) {
  if (topics.empty()) return {};
  if (mode == Aggregation::kPooled) {
    std::vector<std::vector<MentionKey>> g, s;
    for (const auto &[gold, system] : topics) {
      g.insert(g.end(), gold.chains().begin(), gold.chains().end());
      s.insert(s.end(), system.chains().begin(), system.chains().end());
    }
    return score_all(ChainSet(std::move(g)), ChainSet(std::move(s)));
  }
  ConllScores sum;
  auto add = [](MetricResult &acc, const MetricResult &m) {
    acc.recall += m.recall;
    acc.precision += m.precision;
    acc.f1 += m.f1;
  };
  for (const auto &[gold, system] : topics) {
    const ConllScores s = score_all(gold, system);
    add(sum.muc, s.muc);
    add(sum.b_cubed, s.b_cubed);
    add(sum.ceaf_e, s.ceaf_e);
    sum.conll_f1 += s.conll_f1;
  }
  const double n = static_cast<double>(topics.size());
  for (MetricResult *m : {&sum.muc, &sum.b_cubed, &sum.ceaf_e}) {
    m->recall /= n;
    m->precision /= n;
    m->f1 /= n;
  }
  sum.conll_f1 /= n;
  return sum;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Cross-document coreference resolution and CoNLL scoring", "xcoref"};
  app.require_subcommand(1);
  Options opt;

  auto add_corpus = [&](CLI::App *cmd) {
    cmd->add_option("--corpus", opt.corpora, "Corpus JSONL file, one topic per file")->required();
  };
  auto add_pipeline = [&](CLI::App *cmd) {
    add_corpus(cmd);
    cmd->add_option("--vectors", opt.vectors, "Word vector text file")->required();
    cmd->add_option("--config", opt.config, "JSON config (default: $XCOREF_CONFIG, else built-in)");
    cmd->add_option("--trace", opt.trace, "Write the merge trace as JSONL");
    cmd->add_option("--jobs", opt.jobs, "Topics processed concurrently")->check(CLI::PositiveNumber);
  };
  auto add_aggregate = [&](CLI::App *cmd) {
    cmd->add_option("--aggregate", opt.aggregate, "Corpus-level scoring: pooled or macro")
        ->check(CLI::IsMember({"pooled", "macro"}));
  };

  CLI::App *run = app.add_subcommand("run", "Resolve chains and write them");
  add_pipeline(run);
  run->add_option("--out", opt.out, "Chains JSON output")->required();

  CLI::App *score = app.add_subcommand("score", "Score a chains file against gold corpora");
  score->add_option("--gold", opt.gold, "Corpus JSONL files with gold labels")->required();
  score->add_option("--system", opt.system, "Chains JSON written by run or baseline")->required();
  score->add_option("--config", opt.config, "JSON config");
  add_aggregate(score);

  CLI::App *baseline = app.add_subcommand("baseline", "Head-lemma baseline");
  add_corpus(baseline);
  baseline->add_option("--out", opt.out, "Chains JSON output");

  CLI::App *all = app.add_subcommand("all", "Run the baseline and the pipeline, score both");
  add_pipeline(all);
  add_aggregate(all);
  all->add_option("--out", opt.out, "Chains JSON output");
  all->add_option("--conll", opt.conll_dir, "Directory for CoNLL-2012 files");
  all->add_option("--report", opt.report, "JSON run report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(opt, out);
    if (score->parsed()) return cmd_score(opt, out);
    if (baseline->parsed()) return cmd_baseline(opt, out);
    return cmd_all(opt, out);
  } catch (const InvariantViolation &e) {
    err << "xcoref: invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception &e) {
    err << "xcoref: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace xcoref
