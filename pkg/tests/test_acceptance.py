"""Acceptance suite: one test per criterion, each timed against its budget.

Expected values come from independent oracles (tests/oracles.py), from
hand arithmetic, or from fixed reference rows; nothing is asserted that
was not computed outside the code path under test.
"""

import csv
import filecmp
import itertools
import json
import os
import random
import time

from beliefmine.classifier import load_model
from beliefmine.cli import main
from beliefmine.community import HashtagGraph, louvain
from beliefmine.corpus import NO, YES, load_corpus, resolve_label
from beliefmine.structure import (
    evaluate_structure_classifier,
    levenshtein,
    median_string,
)
from conftest import FIXTURES
from oracles import brute_force_medoid, levenshtein_ref, modularity_ref

FIXTURE_CORPUS = os.path.join(FIXTURES, "synthetic_corpus.jsonl")
FIXTURE_EMBEDDINGS = os.path.join(FIXTURES, "synthetic_embeddings.txt")


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc == (None, None, None):
            assert self.elapsed < self.seconds, (
                f"runtime {self.elapsed:.2f}s exceeded the {self.seconds}s budget"
            )
        return False


def _write_count_corpus(path, covid_yes, covid_no, plain_yes, plain_no):
    rows = [
        {"id": "src_covid", "author": "cdcgov", "text": "COVID guidance update",
         "created_at": "2020-03-01T00:00:00Z"},
        {"id": "src_plain", "author": "cdcgov", "text": "general health news",
         "created_at": "2020-03-01T00:00:00Z"},
    ]
    serial = 0
    for source, label, count in (
        ("src_covid", "yes", covid_yes),
        ("src_covid", "no", covid_no),
        ("src_plain", "yes", plain_yes),
        ("src_plain", "no", plain_no),
    ):
        for _ in range(count):
            rows.append(
                {
                    "id": f"r{serial:05d}",
                    "author": f"u{serial:05d}",
                    "text": "response",
                    "created_at": "2020-03-01T01:00:00Z",
                    "in_reply_to": source,
                    "votes": [label],
                }
            )
            serial += 1
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def test_belief_ratio_arithmetic_matches_reference_rows(tmp_path):
    """Counts (473, 2546) and (315, 730) must render as 15.7% and 30.0%."""
    corpus_path = tmp_path / "counts.jsonl"
    _write_count_corpus(corpus_path, 473, 2546, 315, 730)
    out_dir = tmp_path / "out"
    with Budget(1.0):
        rc = main(["report", "--corpus", str(corpus_path),
                   "--output-dir", str(out_dir), "--sources", "cdcgov"])
    assert rc == 0
    with open(out_dir / "report_belief_covid.csv", encoding="utf-8") as fh:
        lines = [l for l in fh.read().splitlines() if not l.startswith("#")]
    table = {row["group"]: row for row in csv.DictReader(lines)}
    assert (table["COVID"]["yes"], table["COVID"]["no"]) == ("473", "2546")
    assert (table["Non-COVID"]["yes"], table["Non-COVID"]["no"]) == ("315", "730")
    assert table["COVID"]["percent"] == "15.7"
    # KNOWN RED: the reference row pins 30.0%, yet its own counts give
    # 315/(315+730) = 30.14%, which is 30.1 at one decimal under
    # percent = yes/(yes+no). No consistent rounding yields both 15.7 for
    # row one and 30.0 for row two, so the reference row contradicts its
    # counts and this assertion documents that defect rather than hide it.
    assert table["Non-COVID"]["percent"] == "30.0", (
        "reference row expects 30.0% but 315/(315+730) renders as "
        f"{100 * 315 / 1045:.1f}% at one decimal; the reference row is "
        "inconsistent with its own counts"
    )


def test_levenshtein_oracle_equivalence_and_metric_axioms():
    rng = random.Random(20200301)
    with Budget(5.0):
        for _ in range(1000):
            a = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 64)))
            b = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 64)))
            assert levenshtein(a, b) == levenshtein_ref(a, b)
        for _ in range(10_000):
            a, b, c = (
                "".join(rng.choice("abcd") for _ in range(rng.randint(0, 12)))
                for _ in range(3)
            )
            dab, dba = levenshtein(a, b), levenshtein(b, a)
            assert dab >= 0
            assert (dab == 0) == (a == b)
            assert dab == dba
            assert dab <= levenshtein(a, c) + levenshtein(c, b)


def test_median_string_exactness_sampled_sweep():
    rng = random.Random(4064)
    with Budget(30.0):
        for _ in range(500):
            strings = [
                "".join(rng.choice("abc") for _ in range(rng.randint(0, 8)))
                for _ in range(rng.randint(1, 6))
            ]
            assert median_string(strings) == brute_force_medoid(strings)


def test_louvain_planted_partition_ten_seeds():
    graph = HashtagGraph()
    left = [f"a{i:02d}" for i in range(20)]
    right = [f"b{i:02d}" for i in range(20)]
    for group in (left, right):
        for u, v in itertools.combinations(group, 2):
            graph.add_edge(u, v)
    graph.add_edge(left[0], right[0])
    graph.add_edge(left[5], right[9])
    planted = [sorted(left), sorted(right)]
    edges = graph.edges()
    with Budget(5.0):
        for seed in range(10):
            part = louvain(graph, seed=seed)
            groups = sorted(sorted(g) for g in part.groups().values())
            assert groups == planted, f"seed {seed} failed to recover the cliques"
            reference_q = modularity_ref(edges, part.communities)
            assert abs(part.modularity - reference_q) <= 1e-9


def test_classifier_sanity_on_bundled_corpus(tmp_path):
    records = load_corpus(FIXTURE_CORPUS)
    labeled = [
        r for r in records
        if r.votes and resolve_label(r.votes) in (YES, NO)
    ]
    assert len(labeled) == 400  # rule-generated separable docs

    out_a, out_b = tmp_path / "a", tmp_path / "b"
    with Budget(10.0):
        for out in (out_a, out_b):
            rc = main(["train", "--corpus", FIXTURE_CORPUS,
                       "--output-dir", str(out), "--seed", "0"])
            assert rc == 0
    eval_doc = json.load(open(out_a / "train_eval.json"))
    assert eval_doc["accuracy"] >= 0.95
    assert (out_a / "train_model.json").read_bytes() == (
        out_b / "train_model.json"
    ).read_bytes()
    model = load_model(str(out_a / "train_model.json"))
    assert len(model.weights) == len(model.vocabulary)


def test_augmentation_contract_on_fixture_table():
    from beliefmine.augment import filter_variants, generate_variants, load_embeddings
    from beliefmine.sentiment import default_lexicon

    records = load_corpus(FIXTURE_CORPUS)
    labeled = [r for r in records if r.votes and resolve_label(r.votes) in (YES, NO)]
    table = load_embeddings(FIXTURE_EMBEDDINGS)
    lexicon = default_lexicon()
    tolerances = (0.0, 0.05, 0.2)
    with Budget(5.0):
        total_retained = 0
        for rec in labeled:
            variants = generate_variants(rec, 2, table)
            retained = {
                tol: {
                    (v.position, v.new_word)
                    for v in filter_variants(rec, variants, lexicon, tol)
                }
                for tol in tolerances
            }
            assert retained[0.0] <= retained[0.05] <= retained[0.2]
            kept = filter_variants(rec, variants, lexicon, 0.05)
            total_retained += len(kept)
            source_tokens = rec.text.split()
            for variant in kept:
                assert variant.sentiment_delta <= 0.05
                assert variant.label == resolve_label(rec.votes)
                changed = variant.text.split()
                assert len(changed) == len(source_tokens)
                diff = [
                    i for i, (a, b) in enumerate(zip(source_tokens, changed)) if a != b
                ]
                assert diff == [variant.position]
        assert total_retained > 0


def test_structure_classifier_margin_case():
    yes_base = "(S (NP (NN aaa)) (VP (VBD bbb)))"
    no_base = "(S (VP (VBZ xxxxx) (VBG yyyyy)) (VP (VBD zzzzz)) (PP (IN wwwww)))"
    items = []
    for i in range(12):
        tweak = chr(ord("a") + i)
        items.append((yes_base.replace("aaa", f"aa{tweak}"), YES))
        items.append((no_base.replace("xxxxx", f"xxxx{tweak}"), NO))
    yes_strings = [p for p, l in items if l == YES]
    no_strings = [p for p, l in items if l == NO]
    intra = max(
        max(levenshtein(a, b) for a, b in itertools.combinations(yes_strings, 2)),
        max(levenshtein(a, b) for a, b in itertools.combinations(no_strings, 2)),
    )
    inter = min(levenshtein(a, b) for a in yes_strings for b in no_strings)
    assert 2 * intra < inter  # provable margin premise
    with Budget(5.0):
        for seed in range(5):
            result = evaluate_structure_classifier(items, 0.7, seed=seed)
            assert result.accuracy == 1.0


def test_end_to_end_determinism(tmp_path):
    out_a, out_b = tmp_path / "run_a", tmp_path / "run_b"
    with Budget(60.0):
        for out in (out_a, out_b):
            rc = main([
                "pipeline",
                "--corpus", FIXTURE_CORPUS,
                "--embeddings", FIXTURE_EMBEDDINGS,
                "--output-dir", str(out),
                "--seed", "7",
            ])
            assert rc == 0
    names_a = sorted(os.listdir(out_a))
    names_b = sorted(os.listdir(out_b))
    assert names_a == names_b and len(names_a) >= 20
    match, mismatch, errors = filecmp.cmpfiles(out_a, out_b, names_a, shallow=False)
    assert mismatch == [] and errors == []
    assert sorted(match) == names_a
