"""Sentence-structure analysis over bracketed parse strings.

A deterministic shallow parser stands in for a full constituency
parser: lexicon + suffix POS tagging, then greedy chunking
(DT? JJ* NN+ -> NP, MD? VB* -> VP, IN followed by NP -> PP). Parse
strings are compared by plain character-level Levenshtein distance;
each belief class is summarized by its medoid (the member string with
minimum total edit distance to the rest), and unseen tweets are
classified by the nearer medoid.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Sequence

from .corpus import NO, YES, LinkedPair, TweetRecord, covid_predicate
from .errors import ClassMissing, EmptyInput, EmptyText
from .textprep import PUNCT_CHARS

_NOUN_SUFFIX_PLURAL_GUARD = ("ss", "us", "is")
_JJ_SUFFIXES = ("ous", "ful", "ive", "ic", "able", "less")


@lru_cache(maxsize=None)
def default_pos_lexicon() -> dict:
    text = resources.files("beliefmine").joinpath("data", "pos_lexicon.tsv").read_text(
        encoding="utf-8"
    )
    return load_pos_lexicon_text(text)


def load_pos_lexicon_text(text: str) -> dict[str, str]:
    lexicon = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, tag = line.partition("\t")
        if word and tag:
            lexicon[word.strip().lower()] = tag.strip()
    return lexicon


def load_pos_lexicon(path: str) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return load_pos_lexicon_text(fh.read())


def pos_tag(word: str, lexicon: dict[str, str]) -> str:
    """Lexicon lookup, then suffix heuristics, else NN."""
    tag = lexicon.get(word)
    if tag is not None:
        return tag
    if word.isdigit():
        return "CD"
    if len(word) >= 4 and word.endswith("ly"):
        return "RB"
    if len(word) >= 5 and word.endswith("ing"):
        return "VBG"
    if len(word) >= 4 and word.endswith("ed"):
        return "VBD"
    if word.endswith(_JJ_SUFFIXES):
        return "JJ"
    if (
        len(word) >= 4
        and word.endswith("s")
        and not word.endswith(_NOUN_SUFFIX_PLURAL_GUARD)
    ):
        return "NNS"
    return "NN"


def _parser_tokens(text: str) -> list[str]:
    tokens = []
    for raw in text.lower().split():
        tok = raw.strip(PUNCT_CHARS)
        # brackets inside a token would unbalance the parse string
        tok = tok.replace("(", "").replace(")", "")
        if tok:
            tokens.append(tok)
    return tokens


def _match_np(tags: list[str], i: int) -> int | None:
    j = i
    if j < len(tags) and tags[j] == "DT":
        j += 1
    while j < len(tags) and tags[j] == "JJ":
        j += 1
    start_nouns = j
    while j < len(tags) and tags[j].startswith("NN"):
        j += 1
    return j if j > start_nouns else None


def _match_vp(tags: list[str], i: int) -> int | None:
    j = i
    if j < len(tags) and tags[j] == "MD":
        j += 1
    while j < len(tags) and tags[j].startswith("VB"):
        j += 1
    return j if j > i else None


def _leaf(tag: str, word: str) -> str:
    return f"({tag} {word})"


def shallow_parse(text: str, lexicon: dict[str, str] | None = None) -> str:
    """Bracketed parse string like "(S (NP (DT the) (NN cat)) (VP (VBD sat)))"."""
    if lexicon is None:
        lexicon = default_pos_lexicon()
    words = _parser_tokens(text)
    if not words:
        raise EmptyText("nothing to parse")
    tags = [pos_tag(w, lexicon) for w in words]

    chunks: list[str] = []
    i = 0
    while i < len(words):
        if tags[i] == "IN":
            end = _match_np(tags, i + 1)
            if end is not None:
                inner = " ".join(_leaf(tags[j], words[j]) for j in range(i + 1, end))
                chunks.append(f"(PP {_leaf('IN', words[i])} (NP {inner}))")
                i = end
                continue
        end = _match_np(tags, i)
        if end is not None:
            inner = " ".join(_leaf(tags[j], words[j]) for j in range(i, end))
            chunks.append(f"(NP {inner})")
            i = end
            continue
        end = _match_vp(tags, i)
        if end is not None:
            inner = " ".join(_leaf(tags[j], words[j]) for j in range(i, end))
            chunks.append(f"(VP {inner})")
            i = end
            continue
        chunks.append(_leaf(tags[i], words[i]))
        i += 1
    return "(S " + " ".join(chunks) + ")"


def parse_brackets(s: str):
    """Parse a bracketed string into nested [label, children...] lists.

    Used as the round-trip validity check for parser output.
    """
    pos = 0

    def parse_node():
        nonlocal pos
        if pos >= len(s) or s[pos] != "(":
            raise ValueError(f"expected '(' at position {pos}")
        pos += 1
        atoms = []
        buf = []
        while pos < len(s):
            c = s[pos]
            if c == "(":
                if buf:
                    atoms.append("".join(buf))
                    buf = []
                atoms.append(parse_node())
            elif c == ")":
                if buf:
                    atoms.append("".join(buf))
                pos += 1
                return atoms
            elif c == " ":
                if buf:
                    atoms.append("".join(buf))
                    buf = []
                pos += 1
                continue
            else:
                buf.append(c)
            if c != "(":
                pos += 1
        raise ValueError("unbalanced parse string")

    s = s.strip()
    if not s:
        raise ValueError("empty parse string")
    tree = parse_node()
    if pos != len(s):
        raise ValueError(f"trailing characters at {pos}")
    return tree


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Unit-cost edit distance (insert/delete/substitute), two-row DP."""
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if lb > la:
        a, b, la, lb = b, a, lb, la
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        ca = a[i - 1]
        curr = [i] * (lb + 1)
        left = i
        for j in range(1, lb + 1):
            if ca == b[j - 1]:
                left = prev[j - 1]
            else:
                up = prev[j]
                diag = prev[j - 1]
                best = diag if diag < up else up
                if left < best:
                    best = left
                left = best + 1
            curr[j] = left
        prev = curr
    return prev[lb]


def token_levenshtein(a: str, b: str) -> int:
    """Edit distance over whitespace tokens instead of characters."""
    return levenshtein(a.split(), b.split())


def median_string(strings: list[str], distance: Callable = levenshtein) -> str:
    """The member minimizing total edit distance to the rest (medoid).

    Ties break toward the earliest index. Duplicate strings are collapsed
    before the pairwise pass (distances depend only on string values), so
    template-heavy corpora stay cheap.
    """
    if not strings:
        raise EmptyInput("median of an empty list")
    unique: list[str] = []
    counts: list[int] = []
    first_seen: list[int] = []
    index_of: dict[str, int] = {}
    for pos, s in enumerate(strings):
        i = index_of.get(s)
        if i is None:
            index_of[s] = len(unique)
            unique.append(s)
            counts.append(1)
            first_seen.append(pos)
        else:
            counts[i] += 1
    n = len(unique)
    if n == 1:
        return strings[0]
    pair = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = distance(unique[i], unique[j])
            pair[i][j] = pair[j][i] = d
    sums = [sum(counts[j] * pair[i][j] for j in range(n)) for i in range(n)]
    best = min(range(n), key=lambda i: (sums[i], first_seen[i]))
    return unique[best]


@dataclass
class ParsedTweet:
    origin_id: str
    parse: str


@dataclass
class MedianPair:
    median_yes: str
    median_no: str


def parse_of(record: TweetRecord, lexicon: dict[str, str] | None = None) -> str:
    """Pre-computed parse when the corpus supplies one, else shallow_parse."""
    if record.parse:
        return record.parse
    return shallow_parse(record.text, lexicon)


def split_by_majority_response(
    labeled: list[tuple[LinkedPair, str]],
    covid_only: bool = True,
    lexicon: dict[str, str] | None = None,
) -> tuple[list[ParsedTweet], list[ParsedTweet]]:
    """Partition source tweets by whether their labeled responses are
    majority-Yes (strictly more than half; even splits count as No)."""
    votes: dict[str, list[str]] = defaultdict(list)
    sources: dict[str, TweetRecord] = {}
    for pair, label in labeled:
        src = pair.source_tweet
        if covid_only and not covid_predicate(src):
            continue
        sources[src.id] = src
        votes[src.id].append(label)

    yes_set: list[ParsedTweet] = []
    no_set: list[ParsedTweet] = []
    for source_id in sorted(sources):
        labels = votes[source_id]
        parsed = ParsedTweet(source_id, parse_of(sources[source_id], lexicon))
        if 2 * labels.count(YES) > len(labels):
            yes_set.append(parsed)
        else:
            no_set.append(parsed)
    return yes_set, no_set


def classify_by_median(parse: str, medians: MedianPair, distance: Callable = levenshtein) -> str:
    """Yes iff strictly closer to the Yes medoid; ties are No."""
    d_yes = distance(parse, medians.median_yes)
    d_no = distance(parse, medians.median_no)
    return YES if d_yes < d_no else NO


@dataclass
class StructureEvalResult:
    accuracy: float
    medians: MedianPair
    train_size: int
    test_size: int
    items: list[dict]


def evaluate_structure_classifier(
    items: list[tuple[str, str]],
    train_fraction: float = 0.7,
    seed: int = 0,
    distance: Callable = levenshtein,
) -> StructureEvalResult:
    """Seeded stratified split, medoids from train only, accuracy on test.

    items are (parse_string, label) pairs with label in {yes, no}.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    by_class: dict[str, list[tuple[str, str]]] = {YES: [], NO: []}
    for parse, label in items:
        if label not in by_class:
            raise ValueError(f"unexpected label {label!r}")
        by_class[label].append((parse, label))
    if not by_class[YES] or not by_class[NO]:
        raise ClassMissing(
            f"need both classes, got yes={len(by_class[YES])} no={len(by_class[NO])}"
        )

    rng = random.Random(seed)
    train: list[tuple[str, str]] = []
    test: list[tuple[str, str]] = []
    for label in (YES, NO):
        group = list(by_class[label])
        rng.shuffle(group)
        cut = max(1, int(round(train_fraction * len(group))))
        train.extend(group[:cut])
        test.extend(group[cut:])

    yes_train = [p for p, l in train if l == YES]
    no_train = [p for p, l in train if l == NO]
    medians = MedianPair(
        median_yes=median_string(yes_train, distance),
        median_no=median_string(no_train, distance),
    )

    records = []
    correct = 0
    for parse, label in test:
        pred = classify_by_median(parse, medians, distance)
        if pred == label:
            correct += 1
        records.append(
            {
                "parse": parse,
                "label": label,
                "predicted": pred,
                "distance_yes": distance(parse, medians.median_yes),
                "distance_no": distance(parse, medians.median_no),
            }
        )
    accuracy = correct / len(test) if test else 0.0
    return StructureEvalResult(
        accuracy=accuracy,
        medians=medians,
        train_size=len(train),
        test_size=len(test),
        items=records,
    )
