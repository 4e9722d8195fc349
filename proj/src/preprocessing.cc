#include "xcoref/preprocessing.h"

#include <algorithm>
#include <map>
#include <optional>

#include "xcoref/text.h"

namespace xcoref {

namespace {

enum class ModifierKind { kCompound, kApposition, kAdjectival, kNoun, kOther };

ModifierKind classify(std::string_view relation) {
  // Subtypes such as "compound:prt" or "nmod:poss" count as their parent.
  std::string_view base = relation.substr(0, relation.find(':'));
  if (base == "compound") return ModifierKind::kCompound;
  if (base == "appos") return ModifierKind::kApposition;
  if (base == "amod") return ModifierKind::kAdjectival;
  if (base == "nmod" || base == "nn") return ModifierKind::kNoun;
  return ModifierKind::kOther;
}

Modifiers modifiers_of(const Mention &m, int governor) {
  Modifiers mods;
  for (const DepEdge &e : m.dep_subtree) {
    if (e.governor != governor || e.dependent == governor) continue;
    switch (classify(e.relation)) {
      case ModifierKind::kCompound: mods.compounds.push_back(e.dependent); break;
      case ModifierKind::kApposition: mods.appositions.push_back(e.dependent); break;
      case ModifierKind::kAdjectival: mods.adjectival.push_back(e.dependent); break;
      case ModifierKind::kNoun: mods.noun_mods.push_back(e.dependent); break;
      case ModifierKind::kOther: break;
    }
  }
  return mods;
}

void add_core(const Mention &m, const Sentence &s, int head, std::set<std::string> &out) {
  out.insert(to_lower(s.at(head).text));
  const Modifiers mods = modifiers_of(m, head);
  for (const auto *list : {&mods.adjectival, &mods.noun_mods, &mods.compounds}) {
    for (int t : *list) out.insert(to_lower(s.at(t).text));
  }
}

}  // namespace

std::vector<Chain> split_chains_by_wiki(std::span<const Chain> chains, const CorpusIndex &index) {
  std::vector<Chain> out;
  for (const Chain &chain : chains) {
    std::map<std::string, std::vector<std::string>> groups;
    std::vector<std::string> untitled;
    for (const std::string &id : chain.mention_ids) {
      const Mention &m = index.mention(id);
      if (m.wiki_title) {
        groups[*m.wiki_title].push_back(id);
      } else {
        untitled.push_back(id);
      }
    }
    if (groups.empty()) {
      Chain c = chain;
      c.wiki_title.reset();
      out.push_back(std::move(c));
      continue;
    }

    // Largest group, smallest title on ties (map order is by title).
    auto largest = groups.begin();
    for (auto it = groups.begin(); it != groups.end(); ++it) {
      if (it->second.size() > largest->second.size()) largest = it;
    }
    largest->second.insert(largest->second.end(), untitled.begin(), untitled.end());

    std::size_t suffix = 0;
    for (auto it = groups.begin(); it != groups.end(); ++it) {
      Chain c;
      c.id = it == largest ? chain.id : chain.id + "#" + std::to_string(++suffix);
      c.mention_ids = it->second;
      std::sort(c.mention_ids.begin(), c.mention_ids.end(),
                [&](const std::string &a, const std::string &b) {
                  return index.position(a) < index.position(b);
                });
      c.wiki_title = it->first;
      c.origin = chain.origin;
      c.concept_type = chain.concept_type;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<int> cap_structure_subtree(std::span<const Constituent> constituents, int head_index,
                                       std::size_t cap) {
  const Constituent *best = nullptr;
  for (const Constituent &c : constituents) {
    if (c.start > head_index || c.end < head_index) continue;
    if (static_cast<std::size_t>(c.size()) > cap) continue;
    if (best == nullptr || c.size() > best->size()) best = &c;
  }
  if (best == nullptr) return {head_index};
  std::vector<int> tokens;
  for (int t = best->start; t <= best->end; ++t) tokens.push_back(t);
  return tokens;
}

Modifiers extract_modifiers(const Mention &mention) {
  return modifiers_of(mention, mention.head_index);
}

std::set<std::string> representative_phrase(const Mention &mention, const CorpusIndex &index) {
  const Sentence &s = index.sentence(mention);
  std::set<std::string> out;
  add_core(mention, s, mention.head_index, out);
  for (int appos : extract_modifiers(mention).appositions) add_core(mention, s, appos, out);
  return out;
}

std::set<std::string> representative_phrase(const Chain &chain, const CorpusIndex &index) {
  std::set<std::string> out;
  for (const std::string &id : chain.mention_ids) {
    out.merge(representative_phrase(index.mention(id), index));
  }
  return out;
}

std::set<std::string> modifier_phrase(const Chain &chain, const CorpusIndex &index) {
  std::set<std::string> out;
  for (const std::string &id : chain.mention_ids) {
    const Mention &m = index.mention(id);
    const Sentence &s = index.sentence(m);
    const Modifiers mods = extract_modifiers(m);
    for (int t : mods.compounds) out.insert(to_lower(s.at(t).text));
    for (int t : mods.appositions) out.insert(to_lower(s.at(t).text));
  }
  return out;
}

}  // namespace xcoref
