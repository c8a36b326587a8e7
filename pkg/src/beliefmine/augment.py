"""Embedding-neighbor data augmentation with a sentiment-shift gate.

Each variant replaces exactly one surface token with one of its nearest
cosine neighbors; variants whose compound sentiment moves more than the
tolerance away from the original are rejected (nearby embedding words
are sometimes antonyms, and the gate is the only antonym defense).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import corpus as corpus_mod
from .errors import EmbeddingFormatError
from .sentiment import ValenceLexicon, compound
from .textprep import PUNCT_CHARS, URL_TOKEN_RE


@dataclass
class EmbeddingTable:
    dimension: int
    words: list[str]
    vectors: np.ndarray  # shape (len(words), dimension)
    index: dict[str, int]
    norms: np.ndarray

    @classmethod
    def from_pairs(cls, entries: dict[str, list[float]] | list[tuple[str, list[float]]]):
        items = list(entries.items()) if isinstance(entries, dict) else list(entries)
        if not items:
            raise ValueError("embedding table must not be empty")
        dim = len(items[0][1])
        words = [w for w, _ in items]
        vectors = np.asarray([v for _, v in items], dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[1] != dim:
            raise ValueError("all vectors must share one dimension")
        norms = np.linalg.norm(vectors, axis=1)
        if not np.any(norms > 0):
            raise ValueError("every vector has zero norm")
        return cls(
            dimension=dim,
            words=words,
            vectors=vectors,
            index={w: i for i, w in enumerate(words)},
            norms=norms,
        )


def load_embeddings(path: str) -> EmbeddingTable:
    """Plain-text embeddings: one 'word v1 v2 ... vd' line per entry."""
    words: list[str] = []
    rows: list[list[float]] = []
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) < 2:
                raise EmbeddingFormatError(line_no, "expected 'word v1 ... vd'")
            word, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise EmbeddingFormatError(
                    line_no, f"expected {dim} components, found {len(values)}"
                )
            try:
                rows.append([float(v) for v in values])
            except ValueError:
                raise EmbeddingFormatError(line_no, "non-numeric vector component") from None
            words.append(word)
    if not words:
        raise EmbeddingFormatError(0, "embedding file has no entries")
    try:
        return EmbeddingTable.from_pairs(list(zip(words, rows)))
    except ValueError as exc:
        raise EmbeddingFormatError(0, str(exc)) from None


def nearest_neighbors(
    word: str, k: int, table: EmbeddingTable
) -> list[tuple[str, float]]:
    """Top-k neighbors by cosine similarity, query word itself excluded.

    Ties break lexicographically; zero-norm vectors are skipped with a
    warning rather than divided by.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    idx = table.index.get(word)
    if idx is None:
        return []
    if table.norms[idx] == 0.0:
        warnings.warn(f"query word {word!r} has a zero-norm vector; no neighbors")
        return []
    sims = table.vectors @ table.vectors[idx]
    candidates = []
    for j, sim in enumerate(sims):
        if j == idx:
            continue
        if table.norms[j] == 0.0:
            warnings.warn(f"skipping zero-norm vector for {table.words[j]!r}")
            continue
        candidates.append((table.words[j], float(sim / (table.norms[j] * table.norms[idx]))))
    candidates.sort(key=lambda c: (-c[1], c[0]))
    return candidates[:k]


@dataclass
class AugmentedVariant:
    original_id: str
    text: str
    position: int
    old_word: str
    new_word: str
    label: str | None = None
    sentiment_delta: float = 0.0


def _split_edges(token: str) -> tuple[str, str, str]:
    core = token.strip(PUNCT_CHARS)
    if not core:
        return "", token, ""
    start = token.index(core)
    return token[:start], core, token[start + len(core) :]


def _match_shape(replacement: str, original: str) -> str:
    if original.isupper() and len(original) > 1:
        return replacement.upper()
    if original[:1].isupper():
        return replacement.capitalize()
    return replacement


def generate_variants(
    tweet: corpus_mod.TweetRecord,
    k: int,
    table: EmbeddingTable,
    label: str | None = None,
) -> list[AugmentedVariant]:
    """One single-word-substitution variant per (position, neighbor) pair.

    URLs, @mentions and #hashtags are never substituted. The label is
    inherited from the record's resolved votes unless given explicitly.
    """
    if label is None and tweet.votes:
        resolved = corpus_mod.resolve_label(tweet.votes)
        if resolved in (corpus_mod.YES, corpus_mod.NO):
            label = resolved
    tokens = tweet.text.split()
    variants = []
    for pos, tok in enumerate(tokens):
        if tok.startswith(("@", "#")) or URL_TOKEN_RE.match(tok.lower()):
            continue
        prefix, core, suffix = _split_edges(tok)
        if not core:
            continue
        for neighbor, _sim in nearest_neighbors(core.lower(), k, table):
            new_tokens = list(tokens)
            new_tokens[pos] = prefix + _match_shape(neighbor, core) + suffix
            variants.append(
                AugmentedVariant(
                    original_id=tweet.id,
                    text=" ".join(new_tokens),
                    position=pos,
                    old_word=core,
                    new_word=neighbor,
                    label=label,
                )
            )
    return variants


def filter_variants(
    original: corpus_mod.TweetRecord,
    variants: list[AugmentedVariant],
    lexicon: ValenceLexicon,
    tolerance: float = 0.05,
) -> list[AugmentedVariant]:
    """Keep variants whose compound sentiment stays within tolerance.

    Every examined variant gets its sentiment_delta recorded, kept or not.
    """
    if tolerance < 0:
        raise ValueError(f"tolerance must be >= 0, got {tolerance}")
    base = compound(original.text, lexicon)
    kept = []
    for variant in variants:
        variant.sentiment_delta = abs(compound(variant.text, lexicon) - base)
        if variant.sentiment_delta <= tolerance:
            kept.append(variant)
    return kept
