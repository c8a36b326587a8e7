"""Corpus ingestion, reply linking, vote resolution and belief-ratio reports.

The corpus is line-delimited JSON, one post per line:

    {"id": str, "author": str, "text": str, "created_at": RFC3339 str,
     "in_reply_to": str|null, "hashtags": [str]|absent,
     "votes": ["yes"|"no"|"maybe"]|absent, "parse": str|absent}

Everything is read-only after load; records never mutate downstream.
"""

from __future__ import annotations

import json
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Iterable

from .errors import DuplicateId, EmptyVotes, MalformedRecord

YES = "yes"
NO = "no"
MAYBE = "maybe"
VALID_VOTES = (YES, NO, MAYBE)


@dataclass
class TweetRecord:
    id: str
    author: str
    text: str
    created_at: datetime
    in_reply_to: str | None = None
    hashtags: list[str] = field(default_factory=list)
    votes: list[str] | None = None
    parse: str | None = None


@dataclass
class LinkedPair:
    source_tweet: TweetRecord
    response: TweetRecord


@dataclass
class LinkDiagnostics:
    dangling: int = 0
    self_replies: int = 0


@dataclass
class BeliefRow:
    group: str
    yes: int
    no: int

    @property
    def total(self) -> int:
        return self.yes + self.no

    @property
    def percent(self) -> float | None:
        if self.total == 0:
            return None
        return 100.0 * self.yes / self.total


def parse_rfc3339(value: str) -> datetime:
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        raise ValueError("timestamp lacks a UTC offset")
    return dt.astimezone(timezone.utc)


def format_rfc3339(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def extract_hashtags(text: str) -> list[str]:
    """Tokens beginning with '#', lowercased, with the '#' stripped."""
    tags = []
    for tok in text.split():
        if tok.startswith("#"):
            tag = tok.lstrip("#").lower()
            if tag:
                tags.append(tag)
    return tags


def record_from_json(obj: dict, line_no: int = 0) -> TweetRecord:
    if not isinstance(obj, dict):
        raise MalformedRecord(line_no, "record is not a JSON object")
    for key in ("id", "author", "text", "created_at"):
        if not isinstance(obj.get(key), str):
            raise MalformedRecord(line_no, f"missing or non-string field {key!r}")
    rec_id = obj["id"]
    if not rec_id:
        raise MalformedRecord(line_no, "empty id")
    try:
        created = parse_rfc3339(obj["created_at"])
    except ValueError as exc:
        raise MalformedRecord(line_no, f"bad created_at: {exc}") from None

    reply = obj.get("in_reply_to")
    if reply is not None and not isinstance(reply, str):
        raise MalformedRecord(line_no, "in_reply_to must be a string or null")
    if reply == rec_id:
        raise MalformedRecord(line_no, "record replies to itself")

    if "hashtags" in obj:
        raw_tags = obj["hashtags"]
        if not isinstance(raw_tags, list) or not all(isinstance(t, str) for t in raw_tags):
            raise MalformedRecord(line_no, "hashtags must be a list of strings")
        tags = []
        for tag in raw_tags:
            if "#" in tag or any(c.isspace() for c in tag):
                raise MalformedRecord(line_no, f"invalid hashtag {tag!r}")
            if tag:
                tags.append(tag.lower())
    else:
        tags = extract_hashtags(obj["text"])

    votes = obj.get("votes")
    if votes is not None:
        if not isinstance(votes, list) or not votes:
            raise MalformedRecord(line_no, "votes must be a non-empty list")
        normalized = []
        for v in votes:
            if not isinstance(v, str) or v.lower() not in VALID_VOTES:
                raise MalformedRecord(line_no, f"invalid vote {v!r}")
            normalized.append(v.lower())
        votes = normalized

    parse = obj.get("parse")
    if parse is not None and not isinstance(parse, str):
        raise MalformedRecord(line_no, "parse must be a string")

    return TweetRecord(
        id=rec_id,
        author=obj["author"],
        text=obj["text"],
        created_at=created,
        in_reply_to=reply,
        hashtags=tags,
        votes=votes,
        parse=parse,
    )


def record_to_json(rec: TweetRecord) -> dict:
    obj = {
        "id": rec.id,
        "author": rec.author,
        "text": rec.text,
        "created_at": format_rfc3339(rec.created_at),
        "in_reply_to": rec.in_reply_to,
        "hashtags": list(rec.hashtags),
    }
    if rec.votes is not None:
        obj["votes"] = list(rec.votes)
    if rec.parse is not None:
        obj["parse"] = rec.parse
    return obj


def load_corpus(path: str) -> list[TweetRecord]:
    """Load and validate a JSONL corpus; blank lines are skipped."""
    records: list[TweetRecord] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from None
            rec = record_from_json(obj, line_no)
            if rec.id in seen:
                raise DuplicateId(rec.id, line_no)
            seen[rec.id] = line_no
            records.append(rec)
    return records


def link_pairs(
    records: list[TweetRecord],
    sources: Iterable[str],
    allow_self_replies: bool = False,
) -> tuple[list[LinkedPair], LinkDiagnostics]:
    """Pair every reply with its parent when the parent's author is a source.

    Handle comparison is case-insensitive. Replies whose parent id is not
    in the corpus are not linked, only counted.
    """
    source_set = {s.casefold() for s in sources}
    if not source_set:
        raise ValueError("sources must be non-empty")
    by_id = {rec.id: rec for rec in records}
    diag = LinkDiagnostics()
    pairs = []
    for rec in records:
        if rec.in_reply_to is None:
            continue
        parent = by_id.get(rec.in_reply_to)
        if parent is None:
            diag.dangling += 1
            continue
        if parent.author.casefold() not in source_set:
            continue
        if parent.author.casefold() == rec.author.casefold() and not allow_self_replies:
            diag.self_replies += 1
            continue
        pairs.append(LinkedPair(source_tweet=parent, response=rec))
    pairs.sort(key=lambda p: (p.source_tweet.id, p.response.id))
    return pairs, diag


def resolve_label(votes: list[str]) -> str | None:
    """Strict-majority vote; None when no value exceeds half the votes."""
    if not votes:
        raise EmptyVotes("cannot resolve an empty vote list")
    counts = Counter(v.lower() for v in votes)
    value, top = counts.most_common(1)[0]
    if 2 * top > len(votes):
        return value
    return None


def labeled_pairs(pairs: list[LinkedPair]) -> list[tuple[LinkedPair, str]]:
    """Resolve response votes to binary labels, dropping Maybe and no-majority."""
    out = []
    for pair in pairs:
        if not pair.response.votes:
            continue
        label = resolve_label(pair.response.votes)
        if label in (YES, NO):
            out.append((pair, label))
    return out


def covid_predicate(source: TweetRecord) -> bool:
    text = source.text.lower()
    return "covid" in text or "corona" in text


def belief_ratio(
    labeled: list[tuple[LinkedPair, str]],
    split: Callable[[TweetRecord], bool] | None = None,
) -> list[BeliefRow]:
    """Two-row yes/no/percent table split by a predicate over the source tweet."""
    if split is None:
        split = covid_predicate
    rows = [BeliefRow("COVID", 0, 0), BeliefRow("Non-COVID", 0, 0)]
    for pair, label in labeled:
        row = rows[0] if split(pair.source_tweet) else rows[1]
        if label == YES:
            row.yes += 1
        else:
            row.no += 1
    return rows


def source_belief_table(
    labeled: list[tuple[LinkedPair, str]],
    top_k: int | None = 10,
) -> list[BeliefRow]:
    """Per-source yes/no/percent rows, sorted by total responses descending.

    Ties on total break by handle in lexicographic order. top_k=None keeps
    every source.
    """
    yes_counts: Counter = Counter()
    no_counts: Counter = Counter()
    display: dict[str, str] = {}
    for pair, label in labeled:
        key = pair.source_tweet.author.casefold()
        display.setdefault(key, pair.source_tweet.author)
        if label == YES:
            yes_counts[key] += 1
        else:
            no_counts[key] += 1
    rows = [
        BeliefRow(display[key], yes_counts[key], no_counts[key])
        for key in display
    ]
    rows.sort(key=lambda r: (-r.total, r.group.casefold()))
    if top_k is not None:
        rows = rows[:top_k]
    return rows


def sample_responses(
    pairs: list[LinkedPair], per_source: int, seed: int
) -> list[LinkedPair]:
    """Seeded uniform sample of at most per_source responses per source tweet."""
    if per_source <= 0:
        return list(pairs)
    grouped: dict[str, list[LinkedPair]] = defaultdict(list)
    for pair in pairs:
        grouped[pair.source_tweet.id].append(pair)
    rng = random.Random(seed)
    kept = []
    for source_id in sorted(grouped):
        group = grouped[source_id]
        if len(group) <= per_source:
            kept.extend(group)
        else:
            kept.extend(rng.sample(group, per_source))
    kept.sort(key=lambda p: (p.source_tweet.id, p.response.id))
    return kept


def sample_subset(items: list, n: int, seed: int) -> list:
    """Seeded uniform sample of n items, preserving the input order."""
    if n <= 0 or n >= len(items):
        return list(items)
    rng = random.Random(seed)
    picked = sorted(rng.sample(range(len(items)), n))
    return [items[i] for i in picked]
