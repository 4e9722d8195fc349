#include "xcoref/chains_io.h"

#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "xcoref/errors.h"

namespace xcoref {

namespace {

using nlohmann::ordered_json;

}  // namespace

MentionKey mention_key(const Mention &m) {
  return {m.doc_id, m.sent_index, m.span_start, m.span_end};
}

ChainSet to_chain_set(std::span<const Chain> chains, const CorpusIndex &index) {
  std::vector<std::vector<MentionKey>> out;
  for (const Chain &c : chains) {
    std::vector<MentionKey> keys;
    for (const std::string &id : c.mention_ids) keys.push_back(mention_key(index.mention(id)));
    out.push_back(std::move(keys));
  }
  return ChainSet(std::move(out));
}

ChainSet gold_chain_set(const CorpusBundle &corpus) {
  std::map<std::string, std::vector<MentionKey>> labeled;
  std::vector<std::vector<MentionKey>> out;
  for (const Mention &m : corpus.mentions) {
    if (m.gold_concept) {
      labeled[*m.gold_concept].push_back(mention_key(m));
    } else {
      out.push_back({mention_key(m)});
    }
  }
  for (auto &[label, keys] : labeled) out.push_back(std::move(keys));
  return ChainSet(std::move(out));
}

SentenceLengths sentence_lengths(const CorpusBundle &corpus) {
  SentenceLengths out;
  for (const Document &d : corpus.documents) {
    auto &lens = out[d.doc_id];
    for (const Sentence &s : d.sentences) lens.push_back(static_cast<int>(s.size()));
  }
  return out;
}

void write_chains_json(std::span<const TopicChains> topics, const std::optional<std::string> &trace_path,
                       std::ostream &out) {
  ordered_json doc;
  doc["trace"] = trace_path ? ordered_json(*trace_path) : ordered_json(nullptr);
  ordered_json topic_list = ordered_json::array();
  for (const TopicChains &t : topics) {
    const CorpusIndex index(*t.corpus);
    ordered_json chains = ordered_json::array();
    for (const Chain &c : t.chains) {
      ordered_json mentions = ordered_json::array();
      for (const std::string &id : c.mention_ids) {
        const Mention &m = index.mention(id);
        mentions.push_back({{"id", m.id},
                            {"doc", m.doc_id},
                            {"sent", m.sent_index},
                            {"start", m.span_start},
                            {"end", m.span_end}});
      }
      chains.push_back({{"chain_id", c.id}, {"mentions", std::move(mentions)}});
    }
    topic_list.push_back({{"topic", t.topic}, {"chains", std::move(chains)}});
  }
  doc["topics"] = std::move(topic_list);
  out << doc.dump(2) << '\n';
}

std::vector<std::pair<std::string, ChainSet>> read_chains_json(std::istream &in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::parse_error &e) {
    throw FormatError(std::string("chains file is not valid JSON: ") + e.what());
  }
  std::vector<std::pair<std::string, ChainSet>> out;
  try {
    for (const auto &topic : doc.at("topics")) {
      std::vector<std::vector<MentionKey>> chains;
      for (const auto &chain : topic.at("chains")) {
        std::vector<MentionKey> keys;
        for (const auto &m : chain.at("mentions")) {
          keys.push_back({m.at("doc").get<std::string>(), m.at("sent").get<int>(),
                          m.at("start").get<int>(), m.at("end").get<int>()});
        }
        chains.push_back(std::move(keys));
      }
      out.emplace_back(topic.at("topic").get<std::string>(), ChainSet(std::move(chains)));
    }
  } catch (const ordered_json::exception &e) {
    throw FormatError(std::string("malformed chains file: ") + e.what());
  }
  return out;
}

void write_trace_jsonl(const std::string &topic, std::span<const TraceEvent> trace,
                       std::ostream &out) {
  for (const TraceEvent &e : trace) {
    ordered_json j;
    j["sieve"] = e.sieve_id;
    j["winner"] = e.winner;
    j["absorbed"] = e.absorbed;
    j["rule"] = e.rule;
    j["score"] = e.score ? ordered_json(*e.score) : ordered_json(nullptr);
    j["topic"] = topic;
    out << j.dump() << '\n';
  }
}

}  // namespace xcoref
