"""Rule-and-lexicon sentiment scoring with a normalized compound value.

Re-implementation of the familiar social-media lexicon scorer, not a
wrapper: summed word valences with negation flips and booster
increments, squashed to [-1, 1] by s/sqrt(s^2 + alpha).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .textprep import PUNCT_CHARS, URL_TOKEN_RE

ALPHA = 15.0
NEGATION_SCALAR = -0.74
NEGATION_WINDOW = 3


@dataclass
class ValenceLexicon:
    """Word valences in [-4, 4] plus negator and booster word lists."""

    valences: dict[str, float]
    negators: frozenset[str] = frozenset()
    boosters: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        bad = {w: v for w, v in self.valences.items() if not -4.0 <= v <= 4.0}
        if bad:
            raise ValueError(f"valences outside [-4, 4]: {bad}")
        overlap = set(self.negators) & set(self.boosters)
        if overlap:
            raise ValueError(f"words listed as both negator and booster: {sorted(overlap)}")


def _read_data_text(name: str) -> str:
    return resources.files("beliefmine").joinpath("data", name).read_text(encoding="utf-8")


def parse_lexicon_tsv(text: str) -> dict[str, float]:
    valences = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, value = line.partition("\t")
        valences[word.strip().lower()] = float(value)
    return valences


def load_lexicon(
    lexicon_path: str | None = None, modifiers_path: str | None = None
) -> ValenceLexicon:
    """Load a valence lexicon (word<TAB>valence) plus negator/booster config.

    Either path may be None to use the bundled defaults.
    """
    if lexicon_path is None:
        lexicon_text = _read_data_text("sentiment_lexicon.tsv")
    else:
        with open(lexicon_path, encoding="utf-8") as fh:
            lexicon_text = fh.read()
    if modifiers_path is None:
        modifiers_text = _read_data_text("sentiment_modifiers.json")
    else:
        with open(modifiers_path, encoding="utf-8") as fh:
            modifiers_text = fh.read()
    modifiers = json.loads(modifiers_text)
    return ValenceLexicon(
        valences=parse_lexicon_tsv(lexicon_text),
        negators=frozenset(w.lower() for w in modifiers.get("negators", [])),
        boosters={w.lower(): float(v) for w, v in modifiers.get("boosters", {}).items()},
    )


@lru_cache(maxsize=1)
def default_lexicon() -> ValenceLexicon:
    return load_lexicon()


def sentiment_tokens(text: str) -> list[str]:
    """Lowercased tokens with URLs dropped and edge punctuation stripped.

    Scoring runs on near-raw text (negators and boosters must survive),
    so this is intentionally lighter than textprep.normalize.
    """
    out = []
    for raw in text.lower().split():
        if URL_TOKEN_RE.match(raw):
            continue
        tok = raw.strip(PUNCT_CHARS)
        if tok:
            out.append(tok)
    return out


def _boosted(valence: float, window: list[str], boosters: dict[str, float]) -> float:
    # Increments push magnitude toward the valence's own sign; damping
    # (negative increments) never flips polarity.
    if valence == 0.0:
        return 0.0
    for tok in window:
        inc = boosters.get(tok)
        if inc is None:
            continue
        if valence > 0:
            valence = max(valence + inc, 0.0)
        else:
            valence = min(valence - inc, 0.0)
    return valence


def compound(text: str, lexicon: ValenceLexicon | None = None) -> float:
    """Compound sentiment of a text, in (-1, 1); 0.0 when nothing matches."""
    if lexicon is None:
        lexicon = default_lexicon()
    tokens = sentiment_tokens(text)
    total = 0.0
    for i, tok in enumerate(tokens):
        valence = lexicon.valences.get(tok)
        if valence is None:
            continue
        window = tokens[max(0, i - NEGATION_WINDOW) : i]
        valence = _boosted(valence, window, lexicon.boosters)
        if any(t in lexicon.negators for t in window):
            valence *= NEGATION_SCALAR
        total += valence
    if total == 0.0:
        return 0.0
    return total / math.sqrt(total * total + ALPHA)
