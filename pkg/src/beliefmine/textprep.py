"""Deterministic text normalization and n-gram extraction.

Every downstream stage (sentiment gating excepted, which works on raw
text) consumes tokens produced here, so the pipeline is fixed:
lowercase -> drop URL tokens -> drop @mentions -> strip '#' from
hashtags -> remove punctuation -> tokenize -> drop stopwords ->
lemmatize with suffix rules.
"""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import InvalidRange

# Token-level URL detection: full scheme://... plus bare t.co short links.
URL_TOKEN_RE = re.compile(r"^(?:[a-z][a-z0-9+.-]*://|t\.co/)")

# ASCII punctuation plus the unicode quotes/dashes common in tweets.
PUNCT_CHARS = string.punctuation + "‘’“”–—…"
_PUNCT_TABLE = str.maketrans("", "", PUNCT_CHARS)

_VOWELS = set("aeiou")


@dataclass
class TokenSeq:
    """Ordered, normalized tokens with a pointer back to their source record."""

    tokens: list[str] = field(default_factory=list)
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def _read_data_text(name: str) -> str:
    return resources.files("beliefmine").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    return frozenset(load_stopwords_text(_read_data_text("stopwords.txt")))


def load_stopwords_text(text: str) -> set[str]:
    return {line.strip().lower() for line in text.splitlines() if line.strip()}


def load_stopwords(path: str) -> set[str]:
    """Stopword file: one word per line, blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return load_stopwords_text(fh.read())


@lru_cache(maxsize=None)
def default_lemma_exceptions() -> dict[str, str]:
    return load_lemma_exceptions_text(_read_data_text("lemma_exceptions.tsv"))


def load_lemma_exceptions_text(text: str) -> dict[str, str]:
    exceptions = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, lemma = line.partition("\t")
        if word and lemma:
            exceptions[word.strip().lower()] = lemma.strip().lower()
    return exceptions


def load_lemma_exceptions(path: str) -> dict[str, str]:
    """Exceptions lexicon: word<TAB>lemma, one pair per line."""
    with open(path, encoding="utf-8") as fh:
        return load_lemma_exceptions_text(fh.read())


def _has_vowel(stem: str) -> bool:
    return any(c in _VOWELS for c in stem)


def _undouble(stem: str) -> str:
    # running -> run, stopped -> stop; keep legitimate doubles (fall, miss, buzz).
    if (
        len(stem) >= 3
        and stem[-1] == stem[-2]
        and stem[-1] not in _VOWELS
        and stem[-1] not in "lsz"
    ):
        return stem[:-1]
    return stem


def _lemmatize_once(word: str, exceptions: dict[str, str]) -> str:
    if word in exceptions:
        return exceptions[word]
    n = len(word)
    if n >= 5 and word.endswith("ies"):
        return word[:-3] + "y"
    if n >= 5 and word.endswith("ied"):
        return word[:-3] + "y"
    if n >= 5 and word.endswith(("ses", "xes", "zes", "ches", "shes")):
        return word[:-2]
    if n >= 4 and word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    if n >= 6 and word.endswith("ing") and _has_vowel(word[:-3]):
        return _undouble(word[:-3])
    if n >= 5 and word.endswith("ed") and not word.endswith("eed") and _has_vowel(word[:-2]):
        return _undouble(word[:-2])
    return word


def lemmatize(word: str, exceptions: dict[str, str] | None = None) -> str:
    """Suffix-rule lemmatizer, iterated to a fixed point so it is idempotent."""
    if exceptions is None:
        exceptions = default_lemma_exceptions()
    seen = {word}
    while True:
        reduced = _lemmatize_once(word, exceptions)
        if reduced == word or reduced in seen:
            return reduced
        seen.add(reduced)
        word = reduced


def normalize(
    text: str,
    stopwords: set[str] | frozenset[str] | None = None,
    lemma_exceptions: dict[str, str] | None = None,
    provenance: str = "",
) -> TokenSeq:
    """Run the full normalization pipeline over one text."""
    if stopwords is None:
        stopwords = default_stopwords()
    if lemma_exceptions is None:
        lemma_exceptions = default_lemma_exceptions()

    tokens: list[str] = []
    for raw in text.lower().split():
        if URL_TOKEN_RE.match(raw):
            continue
        if raw.startswith("@"):
            continue
        if raw.startswith("#"):
            raw = raw.lstrip("#")
        stripped = raw.translate(_PUNCT_TABLE)
        if stripped:
            tokens.append(stripped)

    out: list[str] = []
    for tok in tokens:
        if tok in stopwords:
            continue
        lemma = lemmatize(tok, lemma_exceptions)
        if lemma and lemma not in stopwords:  # lemmas may collapse onto stopwords
            out.append(lemma)
    return TokenSeq(tokens=out, provenance=provenance)


def ngrams(tokens: TokenSeq | list[str], n_min: int = 1, n_max: int = 3) -> Counter:
    """All contiguous n-grams for n in [n_min, n_max], joined by single spaces."""
    if not (1 <= n_min <= n_max):
        raise InvalidRange(f"need 1 <= n_min <= n_max, got [{n_min}, {n_max}]")
    toks = list(tokens)
    grams: Counter = Counter()
    for n in range(n_min, n_max + 1):
        for i in range(len(toks) - n + 1):
            grams[" ".join(toks[i : i + n])] += 1
    return grams
