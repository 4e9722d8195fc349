#include "xcoref/corpus.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "xcoref/errors.h"

namespace xcoref {

using json = nlohmann::json;

namespace {

// Typed field access with line-numbered schema errors.
class RecordReader {
 public:
  explicit RecordReader(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string &msg) const {
    throw SchemaError(line_, msg);
  }

  const json &field(const json &obj, const char *name,
                    const std::string &where) const {
    if (!obj.is_object()) fail(where + " is not an object");
    auto it = obj.find(name);
    if (it == obj.end()) fail("missing field '" + std::string(name) + "' in " + where);
    return *it;
  }

  const json *optional_field(const json &obj, const char *name) const {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string string_field(const json &obj, const char *name,
                           const std::string &where) const {
    const json &v = field(obj, name, where);
    if (!v.is_string()) fail("field '" + std::string(name) + "' in " + where + " must be a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_string(const json &obj, const char *name,
                                             const std::string &where) const {
    const json *v = optional_field(obj, name);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) fail("field '" + std::string(name) + "' in " + where + " must be a string or null");
    return v->get<std::string>();
  }

  int int_value(const json &v, const std::string &what) const {
    if (!v.is_number_integer()) fail(what + " must be an integer");
    auto x = v.get<long long>();
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) fail(what + " out of range");
    return static_cast<int>(x);
  }

  int int_field(const json &obj, const char *name, const std::string &where) const {
    return int_value(field(obj, name, where),
                     "field '" + std::string(name) + "' in " + where);
  }

  const json &array_field(const json &obj, const char *name,
                          const std::string &where) const {
    const json &v = field(obj, name, where);
    if (!v.is_array()) fail("field '" + std::string(name) + "' in " + where + " must be an array");
    return v;
  }

 private:
  std::size_t line_;
};

Token parse_token(const RecordReader &r, const json &j, const std::string &where) {
  Token t;
  t.index = r.int_field(j, "index", where);
  t.text = r.string_field(j, "text", where);
  t.lemma = r.string_field(j, "lemma", where);
  t.pos = r.string_field(j, "pos", where);
  if (const json *stop = r.optional_field(j, "stop")) {
    if (!stop->is_boolean()) r.fail("field 'stop' in " + where + " must be a boolean");
    t.stopword = stop->get<bool>();
  }
  return t;
}

Mention parse_mention(const RecordReader &r, const json &j,
                      const std::string &doc_id, std::size_t ordinal) {
  std::string where = "mention #" + std::to_string(ordinal);
  Mention m;
  m.id = r.string_field(j, "id", where);
  where = "mention '" + m.id + "'";
  m.doc_id = doc_id;
  m.sent_index = r.int_field(j, "sent", where);
  m.span_start = r.int_field(j, "start", where);
  m.span_end = r.int_field(j, "end", where);
  m.head_index = r.int_field(j, "head", where);
  m.ne_type = r.optional_string(j, "ne", where);
  m.wiki_title = r.optional_string(j, "wiki", where);
  m.gold_concept = r.optional_string(j, "gold", where);

  for (const json &s : r.array_field(j, "senses", where)) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_string()) {
      r.fail("each sense in " + where + " must be [category, rank]");
    }
    m.sense_ranks.push_back({s[0].get<std::string>(), r.int_value(s[1], "sense rank in " + where)});
  }
  for (const json &e : r.array_field(j, "dep", where)) {
    if (!e.is_array() || e.size() != 3 || !e[2].is_string()) {
      r.fail("each dependency edge in " + where + " must be [gov, dep, rel]");
    }
    m.dep_subtree.push_back({r.int_value(e[0], "edge governor in " + where),
                             r.int_value(e[1], "edge dependent in " + where),
                             e[2].get<std::string>()});
  }
  for (const json &t : r.array_field(j, "struct", where)) {
    m.struct_subtree.push_back(r.int_value(t, "structure token in " + where));
  }
  return m;
}

void check_mention(std::size_t line, const Mention &m, const Document &doc) {
  auto fail = [&](const std::string &msg) {
    throw IntegrityError(line, "mention '" + m.id + "': " + msg);
  };
  if (m.sent_index < 0 || m.sent_index >= static_cast<int>(doc.sentences.size())) {
    fail("sentence index " + std::to_string(m.sent_index) + " out of range");
  }
  const int len = static_cast<int>(doc.sentences[m.sent_index].size());
  if (m.span_start > m.span_end) {
    fail("span [" + std::to_string(m.span_start) + "," + std::to_string(m.span_end) + "] has start > end");
  }
  if (m.span_start < 0 || m.span_end >= len) {
    fail("span [" + std::to_string(m.span_start) + "," + std::to_string(m.span_end) +
         "] outside sentence of " + std::to_string(len) + " tokens");
  }
  if (m.head_index < m.span_start || m.head_index > m.span_end) {
    fail("head " + std::to_string(m.head_index) + " outside span");
  }
  if (m.struct_subtree.size() > kMaxSubtreeTokens) {
    fail("structure subtree has " + std::to_string(m.struct_subtree.size()) +
         " tokens (limit " + std::to_string(kMaxSubtreeTokens) + ")");
  }
  std::set<int> structure;
  for (int t : m.struct_subtree) {
    if (t < 0 || t >= len) fail("structure token " + std::to_string(t) + " out of range");
    if (!structure.insert(t).second) fail("structure token " + std::to_string(t) + " repeated");
  }
  if (!structure.contains(m.head_index)) fail("structure subtree does not contain the head");

  std::set<int> dependency{m.head_index};
  for (const DepEdge &e : m.dep_subtree) {
    if (e.dependent < 0 || e.dependent >= len || e.governor < -1 || e.governor >= len) {
      fail("dependency edge references a token outside the sentence");
    }
    dependency.insert(e.dependent);
    if (e.governor >= 0) dependency.insert(e.governor);
  }
  if (dependency != structure) {
    fail("dependency subtree tokens differ from structure subtree tokens");
  }

  std::set<std::pair<std::string, int>> senses;
  for (const SenseRank &s : m.sense_ranks) {
    if (s.rank < 1) fail("sense rank must be >= 1");
    if (!senses.emplace(s.category, s.rank).second) {
      fail("duplicate sense " + s.category + " at rank " + std::to_string(s.rank));
    }
  }
}

struct PendingChain {
  Chain chain;
  std::size_t line;
};

}  // namespace

std::string_view origin_name(ChainOrigin origin) {
  switch (origin) {
    case ChainOrigin::kWithinDocCr: return "WITHIN_DOC_CR";
    case ChainOrigin::kSingleton: return "SINGLETON";
    case ChainOrigin::kMerged: return "MERGED";
  }
  return "MERGED";
}

CorpusBundle parse_corpus(std::istream &in, std::string topic_id) {
  CorpusBundle bundle;
  bundle.topic_id = std::move(topic_id);

  std::unordered_map<std::string, std::size_t> mention_pos;
  std::unordered_set<std::string> doc_ids;
  std::vector<PendingChain> pending;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;

    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error &e) {
      throw SchemaError(line, std::string("invalid JSON: ") + e.what());
    }
    RecordReader r(line);
    if (!record.is_object()) r.fail("record is not an object");

    Document doc;
    doc.doc_id = r.string_field(record, "doc_id", "document");
    if (!doc_ids.insert(doc.doc_id).second) {
      throw IntegrityError(line, "duplicate doc_id '" + doc.doc_id + "'");
    }
    const std::string where_doc = "document '" + doc.doc_id + "'";
    const json &sentences = r.array_field(record, "sentences", where_doc);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      const std::string where = "sentence " + std::to_string(s) + " of " + where_doc;
      if (!sentences[s].is_array()) r.fail(where + " must be an array of tokens");
      Sentence sentence;
      for (std::size_t t = 0; t < sentences[s].size(); ++t) {
        sentence.push_back(parse_token(r, sentences[s][t], "token " + std::to_string(t) + " of " + where));
        const Token &tok = sentence.back();
        if (tok.index != static_cast<int>(t)) {
          throw IntegrityError(line, "token indices of " + where + " are not contiguous from 0");
        }
        if (tok.text.empty()) {
          throw IntegrityError(line, "empty token text in " + where);
        }
      }
      doc.sentences.push_back(std::move(sentence));
    }

    const json &mentions = r.array_field(record, "mentions", where_doc);
    for (std::size_t i = 0; i < mentions.size(); ++i) {
      Mention m = parse_mention(r, mentions[i], doc.doc_id, i);
      check_mention(line, m, doc);
      if (!mention_pos.emplace(m.id, bundle.mentions.size()).second) {
        throw IntegrityError(line, "duplicate mention id '" + m.id + "'");
      }
      bundle.mentions.push_back(std::move(m));
    }

    if (const json *chains = r.optional_field(record, "chains")) {
      if (!chains->is_array()) r.fail("field 'chains' in " + where_doc + " must be an array");
      for (std::size_t i = 0; i < chains->size(); ++i) {
        const json &c = (*chains)[i];
        const std::string where = "chain #" + std::to_string(i) + " of " + where_doc;
        Chain chain;
        chain.id = r.string_field(c, "id", where);
        for (const json &id : r.array_field(c, "mentions", where)) {
          if (!id.is_string()) r.fail("mention ids of " + where + " must be strings");
          chain.mention_ids.push_back(id.get<std::string>());
        }
        chain.wiki_title = r.optional_string(c, "wiki", where);
        chain.origin = ChainOrigin::kWithinDocCr;
        pending.push_back({std::move(chain), line});
      }
    }
    bundle.documents.push_back(std::move(doc));
  }

  // Chains may reference mentions of any document in the topic, so they are
  // resolved once every line has been read.
  std::unordered_set<std::string> chain_ids;
  std::vector<bool> covered(bundle.mentions.size(), false);
  std::unordered_map<std::string, std::size_t> doc_order;
  for (std::size_t d = 0; d < bundle.documents.size(); ++d) {
    doc_order.emplace(bundle.documents[d].doc_id, d);
  }
  std::vector<std::pair<std::size_t, Chain>> keyed;
  for (PendingChain &p : pending) {
    Chain &chain = p.chain;
    if (!chain_ids.insert(chain.id).second) {
      throw IntegrityError(p.line, "duplicate chain id '" + chain.id + "'");
    }
    if (chain.mention_ids.empty()) {
      throw IntegrityError(p.line, "chain '" + chain.id + "' has no mentions");
    }
    std::vector<std::size_t> positions;
    for (const std::string &id : chain.mention_ids) {
      auto it = mention_pos.find(id);
      if (it == mention_pos.end()) {
        throw IntegrityError(p.line, "chain '" + chain.id + "' references unknown mention '" + id + "'");
      }
      if (covered[it->second]) {
        throw IntegrityError(p.line, "mention '" + id + "' appears in more than one chain");
      }
      covered[it->second] = true;
      positions.push_back(it->second);
    }
    std::sort(positions.begin(), positions.end());
    chain.mention_ids.clear();
    for (std::size_t pos : positions) chain.mention_ids.push_back(bundle.mentions[pos].id);
    std::size_t doc = doc_order.at(bundle.mentions[positions.front()].doc_id);
    keyed.emplace_back(doc, std::move(chain));
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });
  for (auto &[doc, chain] : keyed) bundle.initial_chains.push_back(std::move(chain));

  for (std::size_t i = 0; i < bundle.mentions.size(); ++i) {
    if (covered[i]) continue;
    const Mention &m = bundle.mentions[i];
    std::string id = "~" + m.id;
    while (chain_ids.contains(id)) id.insert(0, "~");
    chain_ids.insert(id);
    Chain singleton;
    singleton.id = std::move(id);
    singleton.mention_ids = {m.id};
    singleton.origin = ChainOrigin::kSingleton;
    bundle.initial_chains.push_back(std::move(singleton));
  }
  return bundle;
}

CorpusBundle load_corpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return parse_corpus(in, std::filesystem::path(path).stem().string());
}

void serialize_corpus(const CorpusBundle &bundle, std::ostream &out) {
  std::unordered_map<std::string, const Mention *> by_id;
  for (const Mention &m : bundle.mentions) by_id.emplace(m.id, &m);

  for (const Document &doc : bundle.documents) {
    json record;
    record["doc_id"] = doc.doc_id;
    json sentences = json::array();
    for (const Sentence &sentence : doc.sentences) {
      json tokens = json::array();
      for (const Token &t : sentence) {
        tokens.push_back({{"index", t.index}, {"text", t.text}, {"lemma", t.lemma},
                          {"pos", t.pos}, {"stop", t.stopword}});
      }
      sentences.push_back(std::move(tokens));
    }
    record["sentences"] = std::move(sentences);

    json mentions = json::array();
    for (const Mention &m : bundle.mentions) {
      if (m.doc_id != doc.doc_id) continue;
      json jm = {{"id", m.id}, {"sent", m.sent_index}, {"start", m.span_start},
                 {"end", m.span_end}, {"head", m.head_index}};
      if (m.ne_type) jm["ne"] = *m.ne_type;
      if (m.wiki_title) jm["wiki"] = *m.wiki_title;
      json senses = json::array();
      for (const SenseRank &s : m.sense_ranks) senses.push_back({s.category, s.rank});
      jm["senses"] = std::move(senses);
      json dep = json::array();
      for (const DepEdge &e : m.dep_subtree) dep.push_back({e.governor, e.dependent, e.relation});
      jm["dep"] = std::move(dep);
      jm["struct"] = m.struct_subtree;
      if (m.gold_concept) jm["gold"] = *m.gold_concept;
      mentions.push_back(std::move(jm));
    }
    record["mentions"] = std::move(mentions);

    json chains = json::array();
    for (const Chain &c : bundle.initial_chains) {
      if (c.origin == ChainOrigin::kSingleton || c.mention_ids.empty()) continue;
      auto it = by_id.find(c.mention_ids.front());
      if (it == by_id.end() || it->second->doc_id != doc.doc_id) continue;
      json jc = {{"id", c.id}, {"mentions", c.mention_ids}};
      if (c.wiki_title) jc["wiki"] = *c.wiki_title;
      chains.push_back(std::move(jc));
    }
    record["chains"] = std::move(chains);
    out << record.dump() << '\n';
  }
}

bool chain_partition_check(std::span<const Chain> chains,
                           std::span<const std::string> mention_ids) {
  std::unordered_map<std::string_view, bool> seen;
  seen.reserve(mention_ids.size());
  for (const std::string &id : mention_ids) {
    if (!seen.emplace(id, false).second) return false;
  }
  for (const Chain &c : chains) {
    if (c.mention_ids.empty()) return false;
    for (const std::string &id : c.mention_ids) {
      auto it = seen.find(id);
      if (it == seen.end() || it->second) return false;
      it->second = true;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](const auto &kv) { return kv.second; });
}

bool chain_partition_check(std::span<const Chain> chains,
                           std::span<const Mention> mentions) {
  std::vector<std::string> ids;
  ids.reserve(mentions.size());
  for (const Mention &m : mentions) ids.push_back(m.id);
  return chain_partition_check(chains, std::span<const std::string>(ids));
}

CorpusIndex::CorpusIndex(const CorpusBundle &bundle) : bundle_(&bundle) {
  for (std::size_t i = 0; i < bundle.mentions.size(); ++i) {
    mention_pos_.emplace(bundle.mentions[i].id, i);
  }
  for (std::size_t d = 0; d < bundle.documents.size(); ++d) {
    doc_pos_.emplace(bundle.documents[d].doc_id, d);
  }
}

bool CorpusIndex::contains(std::string_view mention_id) const {
  return mention_pos_.contains(std::string(mention_id));
}

std::size_t CorpusIndex::position(std::string_view mention_id) const {
  auto it = mention_pos_.find(std::string(mention_id));
  if (it == mention_pos_.end()) {
    throw Error("unknown mention id '" + std::string(mention_id) + "'");
  }
  return it->second;
}

const Mention &CorpusIndex::mention(std::string_view mention_id) const {
  return bundle_->mentions[position(mention_id)];
}

const Sentence &CorpusIndex::sentence(const Mention &m) const {
  auto it = doc_pos_.find(m.doc_id);
  if (it == doc_pos_.end()) throw Error("unknown document '" + m.doc_id + "'");
  return bundle_->documents[it->second].sentences.at(m.sent_index);
}

const Token &CorpusIndex::token(const Mention &m, int index) const {
  return sentence(m).at(index);
}

std::span<const Token> CorpusIndex::span_tokens(const Mention &m) const {
  const Sentence &s = sentence(m);
  return std::span<const Token>(s).subspan(m.span_start, m.span_end - m.span_start + 1);
}

std::string CorpusIndex::span_text(const Mention &m) const {
  std::string text;
  for (const Token &t : span_tokens(m)) {
    if (!text.empty()) text += ' ';
    text += t.text;
  }
  return text;
}

std::vector<const Mention *> CorpusIndex::mentions_of(const Chain &chain) const {
  std::vector<const Mention *> out;
  out.reserve(chain.mention_ids.size());
  for (const std::string &id : chain.mention_ids) out.push_back(&mention(id));
  return out;
}

}  // namespace xcoref
