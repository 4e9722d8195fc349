#!/usr/bin/env python3
"""Builds the micro-corpus fixture: micro.jsonl and vectors.txt.

Three short news documents about one summit, 40 mentions, hand-annotated
parses, senses and gold concepts. Each merge rule of the pipeline has at
least one mention pair that needs it:

  wiki titles        Trump and Kim mentions spread over documents
  NE heads           "Kim" / "North Korean dictator Kim Jong Un", "May"
  NE compounds       "Donald" / "President Donald Trump"
  phrase containment "The prime minister" / "Teresa May , the prime minister",
                     "the wall" / "the Border Wall"
  token overlap      "The new border wall" / "the Border Wall"
  phrase similarity  "The autocrat" / the Kim chain
  group cores        "Illegal aliens", "Undocumented immigrants", "Migrants"
  country groups     "Senior American administration officials" /
                     "The United States"
  abstract clusters  "discussed an issue" / "the Trump-Kim meeting" / ...

Plural person heads carry noun.group as their first sense, which is how the
annotation adapter reports collective nouns.

Vectors: every word is a concept direction plus noise, so that words of one
concept are close and words of different concepts nearly orthogonal. The
output is written once and committed; rerunning reproduces it byte for byte.
"""

import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent
DIM = 50
ARTICLES = {"a", "an", "the"}
STOP = ARTICLES | {"he", "they", "and", "in", "at", "on", "to", "of", "by", "for", "was",
                   "were", "will", "not", "it", ",", "."}

PERSON = [["noun.person", 1]]
GROUP = [["noun.group", 1], ["noun.person", 2]]
LOCATION = [["noun.location", 1]]

# (text, lemma, pos) per token; stop flags come from STOP.
DOCS = {
    "d1": [
        "President/NNP Donald/NNP Trump/NNP will/MD meet/VB Kim/NNP in/IN June/NNP ./.",
        "The/DT summit/NN will/MD address/VB the/DT nuclear/JJ program/NN ./.",
        "The/DT president/NN said/VBD:say the/DT North/NNP Korean/JJ leader/NN wants/VBZ:want "
        "a/DT deal/NN ./.",
        "Teresa/NNP May/NNP ,/, the/DT prime/JJ minister/NN ,/, praised/VBD:praise the/DT "
        "talks/NNS:talk ./.",
        "Trump/NNP wants/VBZ:want the/DT Border/NNP Wall/NNP funded/VBN:fund ./.",
        "Illegal/JJ aliens/NNS:alien keep/VBP arriving/VBG:arrive ./.",
        "The/DT Border/NNP Wall/NNP will/MD cost/VB billions/NNS:billion ./.",
    ],
    "d2": [
        "North/NNP Korean/JJ dictator/NN Kim/NNP Jong/NNP Un/NNP arrived/VBD:arrive in/IN "
        "Singapore/NNP ./.",
        "The/DT dictator/NN smiled/VBD:smile ./.",
        "Trump/NNP and/CC Kim/NNP held/VBD:hold a/DT historic/JJ meeting/NN ./.",
        "The/DT meeting/NN lasted/VBD:last hours/NNS:hour ./.",
        "He/PRP called/VBD:call it/PRP a/DT great/JJ deal/NN ./.",
        "Undocumented/JJ immigrants/NNS:immigrant were/VBD:be not/RB discussed/VBN:discuss ./.",
        "The/DT United/NNP States/NNPS and/CC North/NNP Korea/NNP signed/VBD:sign a/DT "
        "statement/NN ./.",
        "Senior/JJ American/JJ administration/NN officials/NNS:official praised/VBD:praise "
        "the/DT agreement/NN ./.",
        "The/DT new/JJ border/NN wall/NN was/VBD:be not/RB on/IN the/DT agenda/NN ./.",
    ],
    "d3": [
        "Kim/NNP and/CC Donald/NNP shook/VBD:shake hands/NNS:hand at/IN the/DT summit/NN ./.",
        "They/PRP discussed/VBD:discuss an/DT issue/NN ./.",
        "The/DT prime/JJ minister/NN welcomed/VBD:welcome the/DT deal/NN ./.",
        "May/NNP urged/VBD:urge a/DT halt/NN to/TO the/DT weapons/NNS:weapon program/NN ./.",
        "Migrants/NNS:migrant at/IN the/DT wall/NN were/VBD:be ignored/VBN:ignore by/IN "
        "reporters/NNS:reporter ./.",
        "The/DT autocrat/NN posed/VBD:pose for/IN cameras/NNS:camera ./.",
        "Critics/NNS:critic called/VBD:call the/DT Trump-Kim/NNP meeting/NN a/DT stunt/NN ./.",
    ],
}

# doc, sentence, start, end, head, ne, wiki, senses, gold, extra deps
# Extra deps are (dependent, governor, relation); any other span token hangs
# off the head as "det" (articles), "punct" or "dep".
MENTIONS = [
    # d1
    ("d1", 0, 0, 2, 2, "PERSON", "Donald_Trump", PERSON, "TRUMP",
     [(0, 2, "compound"), (1, 2, "compound")]),
    ("d1", 0, 5, 5, 5, "PERSON", "Kim_Jong-un", PERSON, "KIM", []),
    ("d1", 1, 0, 1, 1, None, None, [["noun.location", 1], ["noun.act", 2]], "MEETING", []),
    ("d1", 1, 4, 6, 6, None, None, [["noun.act", 1], ["noun.communication", 2]], "PROGRAM",
     [(5, 6, "amod")]),
    ("d1", 2, 0, 1, 1, None, None, PERSON, "TRUMP", []),
    ("d1", 2, 3, 6, 6, None, None, PERSON, "KIM", [(4, 5, "compound"), (5, 6, "amod")]),
    ("d1", 2, 8, 9, 9, None, None, [["noun.act", 1]], "DEAL", []),
    ("d1", 3, 0, 5, 1, "PERSON", "Theresa_May", [["noun.person", 1], ["noun.time", 2]], "MAY",
     [(0, 1, "compound"), (2, 1, "punct"), (5, 1, "appos"), (3, 5, "det"), (4, 5, "amod")]),
    ("d1", 3, 8, 9, 9, None, None, [["noun.communication", 1]], "MEETING", []),
    ("d1", 4, 0, 0, 0, "PERSON", "Donald_Trump", PERSON, "TRUMP", []),
    ("d1", 4, 2, 4, 4, "FAC", None, [["noun.artifact", 1]], "WALL", [(3, 4, "compound")]),
    ("d1", 5, 0, 1, 1, None, None, GROUP, "IMMIGRANTS", [(0, 1, "amod")]),
    ("d1", 6, 0, 2, 2, "FAC", None, [["noun.artifact", 1]], "WALL", [(1, 2, "compound")]),
    # d2
    ("d2", 0, 0, 5, 5, "PERSON", "Kim_Jong-un", PERSON, "KIM",
     [(0, 1, "compound"), (1, 2, "amod"), (2, 5, "compound"), (3, 5, "compound"),
      (4, 5, "compound")]),
    ("d2", 1, 0, 1, 1, None, None, PERSON, "KIM", []),
    ("d2", 2, 0, 0, 0, "PERSON", "Donald_Trump", PERSON, "TRUMP", []),
    ("d2", 2, 2, 2, 2, "PERSON", "Kim_Jong-un", PERSON, "KIM", []),
    ("d2", 2, 4, 6, 6, None, None, [["noun.act", 1], ["noun.group", 2]], "MEETING",
     [(5, 6, "amod")]),
    ("d2", 3, 0, 1, 1, None, None, [["noun.act", 1], ["noun.group", 2]], "MEETING", []),
    ("d2", 4, 0, 0, 0, None, None, [], "TRUMP", []),
    ("d2", 4, 3, 5, 5, None, None, [["noun.act", 1]], "DEAL", [(4, 5, "amod")]),
    ("d2", 5, 0, 1, 1, None, None, GROUP, "IMMIGRANTS", [(0, 1, "amod")]),
    ("d2", 6, 0, 2, 2, "GPE", "United_States", LOCATION, "USA", [(1, 2, "compound")]),
    ("d2", 6, 4, 5, 5, "GPE", "North_Korea", LOCATION, "NK", [(4, 5, "compound")]),
    ("d2", 7, 0, 3, 3, None, None, GROUP, "USA",
     [(0, 3, "amod"), (1, 3, "amod"), (2, 3, "compound")]),
    ("d2", 7, 5, 6, 6, None, None, [["noun.communication", 1]], "DEAL", []),
    ("d2", 8, 0, 3, 3, None, None, [["noun.artifact", 1]], "WALL",
     [(1, 3, "amod"), (2, 3, "compound")]),
    # d3
    ("d3", 0, 0, 0, 0, "PERSON", None, PERSON, "KIM", []),
    ("d3", 0, 2, 2, 2, "PERSON", None, PERSON, "TRUMP", []),
    ("d3", 1, 1, 3, 1, None, None, [["verb.communication", 1]], "MEETING",
     [(3, 1, "obj"), (2, 3, "det")]),
    ("d3", 2, 0, 2, 2, None, None, PERSON, "MAY", [(1, 2, "amod")]),
    ("d3", 2, 4, 5, 5, None, None, [["noun.act", 1]], "DEAL", []),
    ("d3", 3, 0, 0, 0, "PERSON", None, [["noun.person", 1], ["noun.time", 2]], "MAY", []),
    ("d3", 3, 5, 7, 7, None, None, [["noun.act", 1], ["noun.communication", 2]], "PROGRAM",
     [(6, 7, "compound")]),
    ("d3", 4, 0, 0, 0, None, None, GROUP, "IMMIGRANTS", []),
    ("d3", 4, 2, 3, 3, None, None, [["noun.artifact", 1]], "WALL", []),
    ("d3", 4, 7, 7, 7, None, None, GROUP, "REPORTERS", []),
    ("d3", 5, 0, 1, 1, None, None, PERSON, "KIM", []),
    ("d3", 5, 4, 4, 4, None, None, [["noun.artifact", 1]], "CAMERAS", []),
    ("d3", 6, 2, 4, 4, None, None, [["noun.act", 1], ["noun.group", 2]], "MEETING",
     [(3, 4, "compound")]),
]

# Within-document chains, by 1-based mention number. The last one wrongly
# joins Trump, "He" and Kim; the entity-link titles split it again.
CHAINS = {
    "d1": [("c1", [1, 5]), ("c2", [2, 6]), ("c3", [11, 13])],
    "d2": [("c4", [14, 15]), ("c5", [18, 19]), ("c6", [16, 20, 17])],
    "d3": [],
}

# Word -> list of (concept, weight). Words absent here get no vector and go
# through the OOV path.
CONCEPT_WORDS = {
    "president": [("TRUMP", 1.0)], "donald": [("TRUMP", 1.0)], "trump": [("TRUMP", 1.0)],
    "kim": [("KIM", 1.0)], "jong": [("KIM", 1.0)], "un": [("KIM", 1.0)],
    "dictator": [("KIM", 1.0)], "autocrat": [("KIM", 1.0)],
    "korean": [("KIM", 0.7), ("NK", 0.7)], "leader": [("KIM", 0.6), ("PERSON", 0.8)],
    "north": [("NK", 1.0)], "korea": [("NK", 1.0)],
    "teresa": [("MAY", 1.0)], "may": [("MAY", 1.0)], "prime": [("MAY", 1.0)],
    "minister": [("MAY", 1.0)],
    "united": [("USA", 1.0)], "states": [("USA", 1.0)], "american": [("USA", 1.0)],
    "senior": [("OFFICIALS", 1.0)], "administration": [("OFFICIALS", 1.0)],
    "officials": [("OFFICIALS", 1.0)], "official": [("OFFICIALS", 1.0)],
    "border": [("WALL", 1.0)], "wall": [("WALL", 1.0)],
    "summit": [("MEETING", 1.0)], "talks": [("MEETING", 1.0)], "talk": [("MEETING", 1.0)],
    "meeting": [("MEETING", 1.0)], "meet": [("MEETING", 1.0)], "discuss": [("MEETING", 1.0)],
    "discussed": [("MEETING", 1.0)], "issue": [("MEETING", 1.0)],
    "trump-kim": [("MEETING", 0.8), ("TRUMP", 0.3), ("KIM", 0.3)],
    "program": [("PROGRAM", 1.0)], "nuclear": [("PROGRAM", 1.0)], "weapons": [("PROGRAM", 1.0)],
    "weapon": [("PROGRAM", 1.0)],
    "deal": [("DEAL", 1.0)], "agreement": [("DEAL", 1.0)], "statement": [("DEAL", 1.0)],
    "illegal": [("IMMIGRANTS", 1.0)], "aliens": [("IMMIGRANTS", 1.0)],
    "alien": [("IMMIGRANTS", 1.0)], "undocumented": [("IMMIGRANTS", 1.0)],
    "immigrants": [("IMMIGRANTS", 1.0)], "immigrant": [("IMMIGRANTS", 1.0)],
    "migrants": [("IMMIGRANTS", 1.0)], "migrant": [("IMMIGRANTS", 1.0)],
    "reporters": [("REPORTERS", 1.0)], "reporter": [("REPORTERS", 1.0)],
    "cameras": [("CAMERAS", 1.0)], "camera": [("CAMERAS", 1.0)],
    "historic": [("HISTORIC", 1.0)], "great": [("GREAT", 1.0)], "new": [("NEW", 1.0)],
    "he": [("PRONOUN", 1.0)], "they": [("PRONOUN", 1.0)],
    "the": [("FUNCTION", 1.0)], "a": [("FUNCTION", 1.0)], "an": [("FUNCTION", 1.0)],
    ",": [("FUNCTION", 1.0)],
}
NOISE = 0.35
SEED = 20210901


def parse_sentence(line):
    tokens = []
    for i, item in enumerate(line.split()):
        text, tag = item.rsplit("/", 1) if item.count("/") == 1 else item.split("/", 1)
        pos, _, lemma = tag.partition(":")
        if not lemma:
            lemma = text if pos.startswith("NNP") else text.lower()
        tokens.append({"index": i, "text": text, "lemma": lemma, "pos": pos,
                       "stop": text.lower() in STOP})
    return tokens


def build_corpus():
    sentences = {doc: [parse_sentence(s) for s in lines] for doc, lines in DOCS.items()}
    mentions = {doc: [] for doc in DOCS}
    for number, spec in enumerate(MENTIONS, start=1):
        doc, sent, start, end, head, ne, wiki, senses, gold, extra = spec
        tokens = sentences[doc][sent]
        assert 0 <= start <= head <= end < len(tokens), spec
        governor = {dep: (gov, rel) for dep, gov, rel in extra}
        deps = [[-1, head, "root"]]
        for t in range(start, end + 1):
            if t == head:
                continue
            if t in governor:
                gov, rel = governor[t]
            elif tokens[t]["text"].lower() in ARTICLES:
                gov, rel = head, "det"
            elif tokens[t]["pos"] in {",", "."}:
                gov, rel = head, "punct"
            else:
                gov, rel = head, "dep"
            deps.append([gov, t, rel])
        mention = {"id": f"m{number}", "sent": sent, "start": start, "end": end, "head": head,
                   "ne": ne, "wiki": wiki, "senses": senses, "dep": deps,
                   "struct": list(range(start, end + 1)), "gold": gold}
        mentions[doc].append({k: v for k, v in mention.items() if v is not None})
    lines = []
    for doc in DOCS:
        record = {"doc_id": doc, "sentences": sentences[doc], "mentions": mentions[doc],
                  "chains": [{"id": cid, "mentions": [f"m{n}" for n in members]}
                             for cid, members in CHAINS[doc]]}
        lines.append(json.dumps(record, ensure_ascii=False, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def build_vectors():
    rng = np.random.default_rng(SEED)
    concepts = sorted({c for parts in CONCEPT_WORDS.values() for c, _ in parts})
    direction = {}
    for c in concepts:
        v = rng.normal(size=DIM)
        direction[c] = v / np.linalg.norm(v)
    lines = [f"{len(CONCEPT_WORDS)} {DIM}"]
    for word in sorted(CONCEPT_WORDS):
        v = sum(w * direction[c] for c, w in CONCEPT_WORDS[word])
        noise = rng.normal(size=DIM)
        v = v / np.linalg.norm(v) + NOISE * noise / np.linalg.norm(noise)
        v = v / np.linalg.norm(v)
        lines.append(word + " " + " ".join(f"{x:.6f}" for x in v))
    return "\n".join(lines) + "\n"


def main():
    (HERE / "micro.jsonl").write_text(build_corpus(), encoding="utf-8")
    (HERE / "vectors.txt").write_text(build_vectors(), encoding="utf-8")


if __name__ == "__main__":
    main()
