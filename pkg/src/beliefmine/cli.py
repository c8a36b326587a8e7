"""Command-line pipeline: ingest, augment, train, predict, communities,
persuasion, report (plus `pipeline` to run the full sequence).

Artifacts are plain files named `<subcommand>_<name>.<ext>`; each
subcommand also writes `<subcommand>_meta.json` with the semantic
config, seed, config hash and artifact digests so any run can be
replayed and compared byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from dataclasses import replace

from . import augment as augment_mod
from . import classifier, community, corpus, sentiment, structure, textprep
from .config import RunConfig, config_hash, from_sources, semantic_dict
from .errors import BeliefMineError


def _fmt_percent(p: float | None) -> str:
    return "" if p is None else f"{p:.1f}"


class ArtifactWriter:
    def __init__(self, subcommand: str, cfg: RunConfig):
        self.subcommand = subcommand
        self.cfg = cfg
        self.hash = config_hash(cfg)
        self.written: dict[str, str] = {}
        os.makedirs(cfg.output_dir, exist_ok=True)

    def _register(self, name: str, data: bytes) -> str:
        path = os.path.join(self.cfg.output_dir, name)
        with open(path, "wb") as fh:
            fh.write(data)
        self.written[name] = hashlib.sha256(data).hexdigest()
        return path

    def comment_line(self) -> str:
        return (
            f"# produced-by={self.subcommand} config-hash={self.hash}"
            f" seed={self.cfg.seed}\n"
        )

    def write_json(self, name: str, obj) -> str:
        data = json.dumps(obj, sort_keys=True, indent=2) + "\n"
        return self._register(name, data.encode("utf-8"))

    def write_jsonl(self, name: str, rows) -> str:
        data = "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
        return self._register(name, data.encode("utf-8"))

    def write_csv(self, name: str, header: str, rows) -> str:
        lines = [self.comment_line(), header + "\n"]
        lines.extend(",".join(str(c) for c in row) + "\n" for row in rows)
        return self._register(name, "".join(lines).encode("utf-8"))

    def write_text(self, name: str, text: str, comment: bool = True) -> str:
        if comment:
            text = self.comment_line() + text
        return self._register(name, text.encode("utf-8"))

    def finish(self, extra: dict | None = None) -> None:
        meta = {
            "subcommand": self.subcommand,
            "config_hash": self.hash,
            "seed": self.cfg.seed,
            "config": semantic_dict(self.cfg),
            "artifacts": dict(sorted(self.written.items())),
        }
        if extra:
            meta.update(extra)
        self.write_json(f"{self.subcommand}_meta.json", meta)


def _load_inputs(cfg: RunConfig):
    records = corpus.load_corpus(cfg.corpus)
    pairs, diag = corpus.link_pairs(records, cfg.sources, cfg.allow_self_replies)
    if cfg.sample_per_tweet > 0:
        pairs = corpus.sample_responses(pairs, cfg.sample_per_tweet, cfg.seed)
    return records, pairs, diag


def _merge_predictions(
    labeled: list, pairs: list, predictions_path: str
) -> list:
    """Extend vote-labeled pairs with predicted labels for the rest."""
    predicted: dict[str, str] = {}
    with open(predictions_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                row = json.loads(line)
                predicted[row["id"]] = row["label"]
    have = {pair.response.id for pair, _ in labeled}
    merged = list(labeled)
    for pair in pairs:
        rid = pair.response.id
        if rid not in have and rid in predicted:
            merged.append((pair, predicted[rid]))
    return merged


def _labeled_for_reporting(cfg: RunConfig):
    records, pairs, _diag = _load_inputs(cfg)
    labeled = corpus.labeled_pairs(pairs)
    if cfg.predictions:
        labeled = _merge_predictions(labeled, pairs, cfg.predictions)
    return records, pairs, labeled


def cmd_ingest(cfg: RunConfig) -> int:
    out = ArtifactWriter("ingest", cfg)
    records, pairs, diag = _load_inputs(cfg)
    out.write_jsonl(
        "ingest_pairs.jsonl",
        (
            {
                "source": corpus.record_to_json(p.source_tweet),
                "response": corpus.record_to_json(p.response),
            }
            for p in pairs
        ),
    )
    out.finish(
        {
            "records": len(records),
            "pairs": len(pairs),
            "dangling_replies": diag.dangling,
            "self_replies_skipped": diag.self_replies,
        }
    )
    return 0


def _resolved_binary(rec: corpus.TweetRecord) -> str | None:
    if not rec.votes:
        return None
    label = corpus.resolve_label(rec.votes)
    return label if label in (corpus.YES, corpus.NO) else None


def cmd_augment(cfg: RunConfig) -> int:
    out = ArtifactWriter("augment", cfg)
    records = corpus.load_corpus(cfg.corpus)
    labeled = [(r, _resolved_binary(r)) for r in records]
    labeled = [(r, lab) for r, lab in labeled if lab is not None]
    if cfg.augment_subset > 0:
        labeled = corpus.sample_subset(labeled, cfg.augment_subset, cfg.seed)
    table = augment_mod.load_embeddings(cfg.embeddings)
    lexicon = sentiment.load_lexicon(cfg.lexicon or None)

    kept_rows, rejected_rows = [], []
    candidates = 0
    for rec, label in labeled:
        variants = augment_mod.generate_variants(rec, cfg.neighbors, table, label)
        candidates += len(variants)
        kept = augment_mod.filter_variants(rec, variants, lexicon, cfg.tolerance)
        kept_ids = {id(v) for v in kept}
        for variant in variants:
            row = {
                "original_id": variant.original_id,
                "text": variant.text,
                "position": variant.position,
                "old_word": variant.old_word,
                "new_word": variant.new_word,
                "label": variant.label,
                "sentiment_delta": variant.sentiment_delta,
            }
            (kept_rows if id(variant) in kept_ids else rejected_rows).append(row)
    out.write_jsonl("augment_augmented.jsonl", kept_rows)
    out.write_jsonl("augment_rejected.jsonl", rejected_rows)
    out.finish(
        {
            "labeled_inputs": len(labeled),
            "candidates": candidates,
            "kept": len(kept_rows),
            "rejected": len(rejected_rows),
        }
    )
    return 0


def _normalizer(cfg: RunConfig):
    stops = textprep.load_stopwords(cfg.stopwords) if cfg.stopwords else None
    def norm(text: str, provenance: str = "") -> textprep.TokenSeq:
        return textprep.normalize(text, stopwords=stops, provenance=provenance)
    return norm


def _stratified_split(labels: list[str], fraction: float, seed: int):
    rng = random.Random(seed)
    train_idx, test_idx = [], []
    for label in (corpus.YES, corpus.NO):
        group = [i for i, l in enumerate(labels) if l == label]
        rng.shuffle(group)
        cut = max(1, int(round(fraction * len(group)))) if group else 0
        train_idx.extend(group[:cut])
        test_idx.extend(group[cut:])
    return sorted(train_idx), sorted(test_idx)


def cmd_train(cfg: RunConfig) -> int:
    out = ArtifactWriter("train", cfg)
    records = corpus.load_corpus(cfg.corpus)
    norm = _normalizer(cfg)

    items = [
        (rec, label)
        for rec, label in ((rec, _resolved_binary(rec)) for rec in records)
        if label is not None
    ]
    texts = [rec.text for rec, _ in items]
    labels = [label for _, label in items]
    ids = [rec.id for rec, _ in items]
    train_idx, test_idx = _stratified_split(labels, cfg.train_split, cfg.seed)

    train_docs = [norm(texts[i], ids[i]) for i in train_idx]
    train_labels = [labels[i] for i in train_idx]
    # augmented variants join the training side only, and only for
    # originals that landed in train (no leakage into test)
    if cfg.augmented:
        train_ids = {ids[i] for i in train_idx}
        with open(cfg.augmented, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                row = json.loads(line)
                if row.get("label") and row["original_id"] in train_ids:
                    train_docs.append(norm(row["text"], row["original_id"]))
                    train_labels.append(row["label"])

    vocab = classifier.fit_vocabulary(train_docs, cfg.ngram_min, cfg.ngram_max)
    train_vecs = [classifier.vectorize(d, vocab) for d in train_docs]
    model = classifier.train(
        train_vecs,
        train_labels,
        vocab=vocab,
        epochs=cfg.epochs,
        learning_rate=cfg.learning_rate,
        regularization=cfg.regularization,
        seed=cfg.seed,
        class_weighting=cfg.class_weighting,
    )
    model.config["ngram_min"] = cfg.ngram_min
    model.config["ngram_max"] = cfg.ngram_max

    test_pairs = [
        (classifier.vectorize(norm(texts[i], ids[i]), vocab), labels[i])
        for i in test_idx
    ]
    report = classifier.evaluate(model, test_pairs) if test_pairs else None

    out.write_json("train_model.json", classifier.model_to_dict(model))

    eval_doc = {
        "train_size": len(train_docs),
        "test_size": len(test_pairs),
        "vocabulary_size": len(vocab),
    }
    if report is not None:
        eval_doc.update(report.to_dict())
    out.write_json("train_eval.json", eval_doc)
    out.finish({"labeled_records": len(items)})
    return 0


def cmd_predict(cfg: RunConfig) -> int:
    out = ArtifactWriter("predict", cfg)
    model_path = cfg.model or os.path.join(cfg.output_dir, "train_model.json")
    model = classifier.load_model(model_path)
    records, pairs, _diag = _load_inputs(cfg)
    norm = _normalizer(cfg)
    rows = []
    for pair in pairs:
        rec = pair.response
        if _resolved_binary(rec) is not None:
            continue
        vec = classifier.vectorize(norm(rec.text, rec.id), model.vocabulary)
        rows.append(
            {
                "id": rec.id,
                "label": classifier.predict(model, vec),
                "score": model.decision(vec),
            }
        )
    out.write_jsonl("predict_labels.jsonl", rows)
    out.finish({"predicted": len(rows), "pairs": len(pairs)})
    return 0


def cmd_communities(cfg: RunConfig) -> int:
    out = ArtifactWriter("communities", cfg)
    records, pairs, _diag = _load_inputs(cfg)
    labeled = corpus.labeled_pairs(pairs)
    if cfg.predictions:
        labeled = _merge_predictions(labeled, pairs, cfg.predictions)

    graph = community.build_graph(
        records, keep_isolated=cfg.keep_isolated, binary_weights=cfg.binary_weights
    )
    partition = community.louvain(graph, seed=cfg.seed)
    coords = community.layout(graph, iterations=cfg.layout_iterations, seed=cfg.seed)
    profiles = community.profile(partition, records, labeled, top_k=cfg.top_hashtags)

    out.write_json("communities_partition.json", partition.communities)
    out.write_csv(
        "communities_layout.csv",
        "node,x,y,community",
        (
            (node, repr(x), repr(y), partition.communities[node])
            for node, (x, y) in sorted(coords.items())
        ),
    )
    out.write_json(
        "communities_profiles.json",
        [
            {
                "community": p.community_id,
                "size": p.size,
                "top_hashtags": [[t, c] for t, c in p.top_hashtags],
                "percent_belief": p.percent_belief,
            }
            for p in profiles
        ],
    )
    out.write_text("communities_graph.dot", community.to_dot(graph, partition), comment=False)
    out.finish(
        {
            "nodes": len(graph.nodes),
            "edges": graph.edge_count(),
            "communities": len(partition.groups()),
            "modularity": partition.modularity,
        }
    )
    return 0


def cmd_persuasion(cfg: RunConfig) -> int:
    out = ArtifactWriter("persuasion", cfg)
    _records, _pairs, labeled = _labeled_for_reporting(cfg)
    yes_set, no_set = structure.split_by_majority_response(labeled)
    items = [(p.parse, corpus.YES) for p in yes_set] + [
        (p.parse, corpus.NO) for p in no_set
    ]
    distance = structure.token_levenshtein if cfg.token_level else structure.levenshtein
    result = structure.evaluate_structure_classifier(
        items, train_fraction=cfg.train_split, seed=cfg.seed, distance=distance
    )

    origin_of = {p.parse: p.origin_id for p in list(yes_set) + list(no_set)}
    out.write_json(
        "persuasion_medians.json",
        {
            "accuracy": result.accuracy,
            "train_size": result.train_size,
            "test_size": result.test_size,
            "median_yes": {
                "parse": result.medians.median_yes,
                "origin": origin_of.get(result.medians.median_yes),
            },
            "median_no": {
                "parse": result.medians.median_no,
                "origin": origin_of.get(result.medians.median_no),
            },
        },
    )
    out.write_jsonl("persuasion_items.jsonl", result.items)
    if cfg.distance_matrix:
        parsed = sorted(list(yes_set) + list(no_set), key=lambda p: p.origin_id)
        header = "id," + ",".join(p.origin_id for p in parsed)
        cache: dict[tuple[str, str], int] = {}
        def dist(a: str, b: str) -> int:
            key = (a, b) if a <= b else (b, a)
            if key not in cache:
                cache[key] = distance(a, b)
            return cache[key]
        rows = []
        for p in parsed:
            rows.append([p.origin_id] + [dist(p.parse, q.parse) for q in parsed])
        out.write_csv("persuasion_distances.csv", header, rows)
    out.finish(
        {
            "majority_yes_sources": len(yes_set),
            "majority_no_sources": len(no_set),
        }
    )
    return 0


def cmd_report(cfg: RunConfig) -> int:
    out = ArtifactWriter("report", cfg)
    _records, _pairs, labeled = _labeled_for_reporting(cfg)
    ratio_rows = corpus.belief_ratio(labeled)
    source_rows = corpus.source_belief_table(labeled, cfg.top_sources)

    out.write_csv(
        "report_belief_covid.csv",
        "group,yes,no,percent",
        ((r.group, r.yes, r.no, _fmt_percent(r.percent)) for r in ratio_rows),
    )
    out.write_csv(
        "report_sources.csv",
        "group,yes,no,percent",
        ((r.group, r.yes, r.no, _fmt_percent(r.percent)) for r in source_rows),
    )

    md = ["# Belief report", "", "## Belief in COVID vs. non-COVID source tweets", ""]
    md.append("| group | yes | no | percent |")
    md.append("| --- | --- | --- | --- |")
    for r in ratio_rows:
        md.append(f"| {r.group} | {r.yes} | {r.no} | {_fmt_percent(r.percent)} |")
    md.extend(["", f"## Top {cfg.top_sources} sources by labeled responses", ""])
    md.append("| source | yes | no | percent |")
    md.append("| --- | --- | --- | --- |")
    for r in source_rows:
        md.append(f"| {r.group} | {r.yes} | {r.no} | {_fmt_percent(r.percent)} |")
    out.write_text("report_tables.md", "\n".join(md) + "\n", comment=False)
    out.finish({"labeled_pairs": len(labeled)})
    return 0


def cmd_pipeline(cfg: RunConfig) -> int:
    """Run every stage in order inside one output directory.

    Later stages consume the earlier artifacts: train extends its
    training split with the augmented variants, and the profiling and
    reporting stages merge the predicted labels for otherwise-unlabeled
    responses.
    """
    rc = cmd_ingest(cfg)
    rc = rc or cmd_augment(cfg)
    aug_cfg = replace(cfg, augmented=os.path.join(cfg.output_dir, "augment_augmented.jsonl"))
    rc = rc or cmd_train(aug_cfg)
    rc = rc or cmd_predict(cfg)
    pred_cfg = replace(cfg, predictions=os.path.join(cfg.output_dir, "predict_labels.jsonl"))
    rc = rc or cmd_communities(pred_cfg)
    rc = rc or cmd_persuasion(pred_cfg)
    rc = rc or cmd_report(pred_cfg)
    return rc


COMMANDS = {
    "ingest": cmd_ingest,
    "augment": cmd_augment,
    "train": cmd_train,
    "predict": cmd_predict,
    "communities": cmd_communities,
    "persuasion": cmd_persuasion,
    "report": cmd_report,
    "pipeline": cmd_pipeline,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beliefmine",
        description="Belief and persuasion mining over a tweet/response corpus.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="TOML file with RunConfig fields")
        p.add_argument("--corpus")
        p.add_argument("--embeddings")
        p.add_argument("--lexicon")
        p.add_argument("--stopwords")
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--sources", help="comma-separated source handles")
        p.add_argument("--sources-file", dest="sources_file")
        p.add_argument("--neighbors", type=int)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--ngram-min", dest="ngram_min", type=int)
        p.add_argument("--ngram-max", dest="ngram_max", type=int)
        p.add_argument("--train-split", dest="train_split", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--sample-per-tweet", dest="sample_per_tweet", type=int)
        p.add_argument("--augment-subset", dest="augment_subset", type=int)
        p.add_argument("--top-sources", dest="top_sources", type=int)
        p.add_argument("--top-hashtags", dest="top_hashtags", type=int)
        p.add_argument("--layout-iterations", dest="layout_iterations", type=int)
        p.add_argument("--epochs", type=int)
        p.add_argument("--learning-rate", dest="learning_rate", type=float)
        p.add_argument("--regularization", type=float)
        p.add_argument(
            "--no-class-weighting",
            dest="class_weighting",
            action="store_false",
            default=None,
        )
        p.add_argument("--binary-weights", dest="binary_weights", action="store_true", default=None)
        p.add_argument(
            "--allow-self-replies", dest="allow_self_replies", action="store_true", default=None
        )
        p.add_argument("--keep-isolated", dest="keep_isolated", action="store_true", default=None)
        p.add_argument("--token-level", dest="token_level", action="store_true", default=None)
        p.add_argument("--predictions")
        p.add_argument("--augmented")
        p.add_argument("--model")
        p.add_argument(
            "--distance-matrix", dest="distance_matrix", action="store_true", default=None
        )
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {}
    for key in (
        "corpus", "embeddings", "lexicon", "stopwords", "output_dir", "neighbors",
        "tolerance", "ngram_min", "ngram_max", "train_split", "seed",
        "sample_per_tweet", "augment_subset", "top_sources", "top_hashtags",
        "layout_iterations", "epochs", "learning_rate", "regularization",
        "class_weighting", "binary_weights", "allow_self_replies", "keep_isolated",
        "token_level", "predictions", "augmented", "model", "distance_matrix",
    ):
        overrides[key] = getattr(args, key, None)
    if args.sources_file:
        with open(args.sources_file, encoding="utf-8") as fh:
            overrides["sources"] = [l.strip() for l in fh if l.strip()]
    elif args.sources:
        overrides["sources"] = [s.strip() for s in args.sources.split(",") if s.strip()]
    # environment override applies to the output dir only, below explicit flags
    if overrides.get("output_dir") is None and os.environ.get("BELIEFMINE_OUTPUT_DIR"):
        overrides["output_dir"] = os.environ["BELIEFMINE_OUTPUT_DIR"]
    return from_sources(args.config, overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return COMMANDS[args.subcommand](cfg)
    except (BeliefMineError, ValueError, OSError) as exc:
        error = {
            "error": type(exc).__name__,
            "message": str(exc),
            "subcommand": args.subcommand,
        }
        print(json.dumps(error, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
