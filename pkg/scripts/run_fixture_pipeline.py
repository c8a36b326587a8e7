#!/usr/bin/env python3
"""Run the full pipeline on the bundled fixture and print the headline tables."""

import json
import os
import sys
import tempfile

REPO = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")
sys.path.insert(0, os.path.join(REPO, "src"))

from beliefmine.cli import main  # noqa: E402


def show_csv(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                print("  " + line.rstrip())


def run(seed=7, out_dir=None):
    out = out_dir or tempfile.mkdtemp(prefix="beliefmine_")
    rc = main([
        "pipeline",
        "--corpus", os.path.join(REPO, "fixtures", "synthetic_corpus.jsonl"),
        "--embeddings", os.path.join(REPO, "fixtures", "synthetic_embeddings.txt"),
        "--output-dir", out,
        "--seed", str(seed),
    ])
    if rc != 0:
        return rc

    print(f"artifacts in {out}\n")
    print("belief in COVID vs. non-COVID source tweets:")
    show_csv(os.path.join(out, "report_belief_covid.csv"))
    print("\ntop sources by labeled responses:")
    show_csv(os.path.join(out, "report_sources.csv"))

    profiles = json.load(open(os.path.join(out, "communities_profiles.json")))
    meta = json.load(open(os.path.join(out, "communities_meta.json")))
    print(f"\ncommunities (modularity {meta['modularity']:.3f}):")
    for p in profiles:
        tags = ", ".join(t for t, _ in p["top_hashtags"][:5])
        pct = "-" if p["percent_belief"] is None else f"{p['percent_belief']:.0f}%"
        print(f"  {p['community']}: {p['size']} users, belief {pct}, tags: {tags}")

    medians = json.load(open(os.path.join(out, "persuasion_medians.json")))
    print(f"\nstructure classifier accuracy: {medians['accuracy']:.3f}")
    print(f"believed-median parse:    {medians['median_yes']['parse']}")
    print(f"disbelieved-median parse: {medians['median_no']['parse']}")

    eval_doc = json.load(open(os.path.join(out, "train_eval.json")))
    print(f"\nbelief classifier test accuracy: {eval_doc['accuracy']:.3f} "
          f"(train {eval_doc['train_size']}, test {eval_doc['test_size']})")
    return 0


if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else None
    sys.exit(run(out_dir=out_dir))
