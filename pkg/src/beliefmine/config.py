"""Run configuration shared by every CLI subcommand.

Artifacts embed a hash of the semantic configuration; input files enter
the hash by content digest rather than by path, so identical runs in
different directories produce identical artifacts.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache
from importlib import resources

from .errors import ConfigError

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib


@lru_cache(maxsize=1)
def default_source_handles() -> tuple[str, ...]:
    text = resources.files("beliefmine").joinpath("data", "source_handles.txt").read_text(
        encoding="utf-8"
    )
    return tuple(line.strip() for line in text.splitlines() if line.strip())


@dataclass
class RunConfig:
    corpus: str = ""
    embeddings: str = ""
    lexicon: str = ""  # empty -> bundled default
    stopwords: str = ""  # empty -> bundled default
    output_dir: str = "out"
    sources: list[str] = field(default_factory=lambda: list(default_source_handles()))
    neighbors: int = 2
    tolerance: float = 0.05
    ngram_min: int = 1
    ngram_max: int = 3
    train_split: float = 0.7
    seed: int = 0
    sample_per_tweet: int = 0  # 0 keeps every response
    augment_subset: int = 0  # 0 augments every labeled record
    top_sources: int = 10
    top_hashtags: int = 8
    layout_iterations: int = 50
    epochs: int = 20
    learning_rate: float = 0.5
    regularization: float = 1e-4
    class_weighting: bool = True
    binary_weights: bool = False
    allow_self_replies: bool = False
    keep_isolated: bool = False
    token_level: bool = False
    predictions: str = ""  # optional predict artifact to merge into reports
    augmented: str = ""  # optional augment artifact to extend training
    model: str = ""  # model path for predict; default <output_dir>/train_model.json
    distance_matrix: bool = False  # persuasion: also emit the pairwise CSV

    def validate(self) -> None:
        if not 0.0 < self.train_split < 1.0:
            raise ConfigError(f"train_split must be in (0, 1), got {self.train_split}")
        if self.tolerance < 0:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance}")
        if self.neighbors < 1:
            raise ConfigError(f"neighbors must be >= 1, got {self.neighbors}")
        if not 1 <= self.ngram_min <= self.ngram_max:
            raise ConfigError(
                f"need 1 <= ngram_min <= ngram_max, got [{self.ngram_min}, {self.ngram_max}]"
            )
        if not self.sources:
            raise ConfigError("sources must not be empty")


_PATH_FIELDS = (
    "corpus",
    "embeddings",
    "lexicon",
    "stopwords",
    "predictions",
    "augmented",
    "model",
)


def _file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def semantic_dict(cfg: RunConfig) -> dict:
    """Config as a replayable dict: paths replaced by basename + content hash."""
    raw = asdict(cfg)
    raw.pop("output_dir")
    for name in _PATH_FIELDS:
        path = raw.pop(name)
        if path:
            raw[name] = {
                "file": os.path.basename(path),
                "sha256": _file_digest(path) if os.path.exists(path) else None,
            }
        else:
            raw[name] = None
    return raw


def config_hash(cfg: RunConfig) -> str:
    canonical = json.dumps(semantic_dict(cfg), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def load_toml(path: str) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def from_sources(toml_path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults <- TOML file <- explicit overrides (CLI flags)."""
    cfg = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    if toml_path:
        data = load_toml(toml_path)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key, value in data.items():
            setattr(cfg, key, value)
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    cfg.sources = list(cfg.sources)
    cfg.validate()
    return cfg
