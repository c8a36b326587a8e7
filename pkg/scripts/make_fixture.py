#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixture corpus and embedding table.

The fixture is fully deterministic (fixed seed) and is committed under
fixtures/; rerunning this script must reproduce the files byte for byte.

Layout of the generated corpus:
  * 200 source tweets by the 26 default source handles (60% mention
    COVID/corona), most carrying one topical hashtag;
  * 3 responses per source from 48 responder accounts split across four
    hashtag communities with different belief propensities;
  * the first 2 responses of every source carry annotator votes that
    resolve to a strict yes/no majority -> exactly 400 labeled docs whose
    label follows the cue words in the text (separable by construction);
  * remaining responses are unlabeled (a few carry maybe-majority votes).
"""

from __future__ import annotations

import json
import math
import os
import random

SEED = 42
BASE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

SOURCE_HANDLES = [
    "cdcgov", "JHSPH_CHS", "WHO", "THLresearch", "coimmunityproj",
    "UAlberta_FoMD", "hpscireland", "CovidActNow", "harvardmed", "NIH",
    "OxfordMedSci", "Cambridge_Uni", "US_FDA", "bmj_latest", "IDMOD_ORG",
    "umnmedschool", "NEJM", "imperial_SoM", "HealthNYGov", "LSHTM",
    "YaleMed", "UniversityLeeds", "StanfordMed", "PHE_uk", "ScrippsHealth",
    "TAMUmedicine",
]

COMMUNITIES = {
    0: {
        "tags": ["scamdemic", "plandemic", "hoax", "wakeup", "donttrustthem",
                 "sheeple", "fauci", "billgates"],
        "belief": 0.06,
    },
    1: {
        "tags": ["vaccination", "health", "maskup", "flattenthecurve",
                 "science", "staysafe", "washyourhands", "nhs"],
        "belief": 0.78,
    },
    2: {
        "tags": ["mentalhealthmatters", "loveisessential", "selfcare",
                 "bekind", "together", "stayhome"],
        "belief": 0.88,
    },
    3: {
        "tags": ["backtoschool", "homeschool", "athome", "remotelearning",
                 "kids", "teachers"],
        "belief": 0.42,
    },
}

COVID_TEMPLATES = [
    "New COVID study shows masks work",
    "COVID update: please keep following the guidance",
    "Our corona data shows cases rising again",
    "COVID vaccine trial results look promising",
    "Experts say COVID spreads indoors quickly",
    "Read the new corona testing guidelines",
    "COVID briefing: wash hands and stay home",
    "The corona model predicts a second wave",
]

NONCOVID_TEMPLATES = [
    "New study on heart health published today",
    "Our researchers report progress on cancer treatment",
    "Flu season update from the clinic",
    "Read the new nutrition guidance for adults",
    "Sleep research shows screens delay rest",
    "Exercise study finds walking helps memory",
]

YES_TEMPLATES = [
    "I trust this guidance and will keep following it",
    "Thank you, this advice is helpful and correct",
    "Agreed, the data is clear so people should listen",
    "Good update, I will keep sharing the guidance",
    "This is correct, trust the science and stay safe",
    "Helpful thread, the study seems solid and honest",
]

NO_TEMPLATES = [
    "This is a hoax, stop the lies",
    "Fake numbers again, what a scam",
    "I do not trust this fraud agency",
    "Wrong again, the guidelines keep changing daily",
    "More propaganda, wake up people",
    "Total lie, the test numbers are fake",
]

NEUTRAL_TEMPLATES = [
    "Can you share the full study link",
    "What does this mean for schools this fall",
    "Interesting, curious how the test was run",
    "Does the guidance apply to kids too",
]

SOURCE_TAGS = {
    True: ["covid19", "coronavirus", "publichealth", "flattenthecurve", "testing"],
    False: ["health", "research", "medicine", "wellness", "sciencenews"],
}

YES_VOTE_PATTERNS = [["yes", "yes", "yes"], ["yes", "yes", "no"], ["yes", "yes", "maybe"]]
NO_VOTE_PATTERNS = [["no", "no", "no"], ["no", "no", "yes"], ["no", "no", "maybe"]]
MAYBE_VOTE_PATTERNS = [["maybe", "maybe", "yes"], ["maybe", "maybe", "no"]]

SYNONYM_CLUSTERS = [
    ["keep", "stay", "hold"],
    ["test", "exam", "check"],
    ["guidance", "guidelines", "advice"],
    ["update", "report", "briefing"],
    ["study", "research", "analysis"],
    ["shows", "finds", "suggests"],
    ["data", "numbers", "figures"],
    ["people", "folks", "everyone"],
    ["helps", "aids", "supports"],
    ["rising", "climbing", "increasing"],
    ["quickly", "rapidly", "fast"],
    ["share", "post", "send"],
    ["link", "url", "page"],
    ["kids", "children", "students"],
    ["schools", "classrooms", "campuses"],
    ["wave", "surge", "spike"],
]


def _stamp(i: int) -> str:
    # minutes after 2020-03-01T00:00:00Z, kept well inside one month
    hours, minutes = divmod(i * 7, 60)
    day, hour = divmod(hours, 24)
    return f"2020-03-{day + 1:02d}T{hour:02d}:{minutes:02d}:00Z"


def build_corpus(rng: random.Random) -> list[dict]:
    records = []
    responders = [f"user{i:02d}" for i in range(48)]
    responder_community = {u: i % 4 for i, u in enumerate(responders)}

    n_sources = 200
    covid_flags = [i % 5 < 3 for i in range(n_sources)]  # 60% covid
    response_serial = 0
    for i in range(n_sources):
        covid = covid_flags[i]
        template = (COVID_TEMPLATES if covid else NONCOVID_TEMPLATES)[
            i % (len(COVID_TEMPLATES) if covid else len(NONCOVID_TEMPLATES))
        ]
        source_id = f"S{i:03d}"
        source = {
            "id": source_id,
            "author": SOURCE_HANDLES[i % len(SOURCE_HANDLES)],
            "text": template,
            "created_at": _stamp(i),
            "in_reply_to": None,
        }
        if rng.random() < 0.7:
            source["hashtags"] = [rng.choice(SOURCE_TAGS[covid])]
        else:
            source["hashtags"] = []
        records.append(source)

        # audiences cluster by topic: covid sources draw the conspiracy and
        # public-health crowds, the rest draw mental-health and school folks
        community_pool = [0, 0, 1, 1, 2] if covid else [1, 2, 2, 3, 3]
        for j in range(3):
            responder_pool = [
                u for u in responders
                if responder_community[u] == rng.choice(community_pool)
            ]
            author = rng.choice(responder_pool)
            com = responder_community[author]
            belief = rng.random() < COMMUNITIES[com]["belief"] * (0.75 if covid else 1.0)
            if j < 2:
                text = rng.choice(YES_TEMPLATES if belief else NO_TEMPLATES)
                votes = rng.choice(YES_VOTE_PATTERNS if belief else NO_VOTE_PATTERNS)
            else:
                text = rng.choice(NEUTRAL_TEMPLATES + YES_TEMPLATES + NO_TEMPLATES)
                votes = rng.choice(MAYBE_VOTE_PATTERNS) if rng.random() < 0.1 else None
            response = {
                "id": f"R{response_serial:04d}",
                "author": author,
                "text": text,
                "created_at": _stamp(1000 + response_serial),
                "in_reply_to": source_id,
                "hashtags": rng.sample(
                    COMMUNITIES[com]["tags"], k=rng.choice([1, 1, 2])
                ),
            }
            if votes is not None:
                response["votes"] = votes
            records.append(response)
            response_serial += 1
    return records


def fixture_vocabulary(records: list[dict]) -> list[str]:
    import string as _string

    vocab = set()
    for rec in records:
        for tok in rec["text"].lower().split():
            tok = tok.strip(_string.punctuation)
            if tok:
                vocab.add(tok)
    for cluster in SYNONYM_CLUSTERS:
        vocab.update(cluster)
    return sorted(vocab)


def build_embeddings(words: list[str], rng: random.Random, dim: int = 25) -> list[str]:
    def unit(vec):
        norm = math.sqrt(sum(x * x for x in vec))
        return [x / norm for x in vec]

    cluster_of = {}
    for idx, cluster in enumerate(SYNONYM_CLUSTERS):
        for w in cluster:
            cluster_of[w] = idx
    bases = {
        idx: unit([rng.gauss(0, 1) for _ in range(dim)])
        for idx in range(len(SYNONYM_CLUSTERS))
    }
    lines = []
    for word in words:
        if word in cluster_of:
            base = bases[cluster_of[word]]
            vec = unit([b + rng.gauss(0, 0.04) for b in base])
        else:
            vec = unit([rng.gauss(0, 1) for _ in range(dim)])
        lines.append(word + " " + " ".join(f"{x:.5f}" for x in vec))
    return lines


def main() -> None:
    os.makedirs(BASE_DIR, exist_ok=True)
    rng = random.Random(SEED)
    records = build_corpus(rng)

    labeled = sum(1 for r in records if "votes" in r and r["votes"].count(r["votes"][0]) * 2 > 3
                  and r["votes"][0] in ("yes", "no"))
    corpus_path = os.path.join(BASE_DIR, "synthetic_corpus.jsonl")
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    words = fixture_vocabulary(records)
    emb_rng = random.Random(SEED + 1)
    emb_path = os.path.join(BASE_DIR, "synthetic_embeddings.txt")
    with open(emb_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(build_embeddings(words, emb_rng)) + "\n")

    print(f"wrote {corpus_path}: {len(records)} records")
    print(f"wrote {emb_path}: {len(words)} words")
    print(f"strict-majority yes/no docs: {labeled}")


if __name__ == "__main__":
    main()
