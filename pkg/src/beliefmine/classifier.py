"""Belief classification: TF-IDF over 1-3-grams plus a linear max-margin model.

The trainer is a seeded stochastic subgradient descent on the hinge loss
with L2 shrinkage, so runs are reproducible without an external solver.
Vectors are sparse dicts (term index -> weight); the model keeps a dense
weight array.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .corpus import NO, YES
from .errors import EmptyCorpus, EmptyTestSet, SingleClassCorpus
from .textprep import TokenSeq, ngrams

SparseVec = dict[int, float]


@dataclass
class TfidfVocabulary:
    terms: list[str]  # lexicographic; position is the dense index
    df: list[int]
    doc_count: int
    n_min: int = 1
    n_max: int = 3
    index: dict[str, int] = field(init=False, repr=False)
    idf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.terms)}
        n = self.doc_count
        self.idf = np.array(
            [math.log((1 + n) / (1 + d)) + 1.0 for d in self.df], dtype=np.float64
        )

    def __len__(self) -> int:
        return len(self.terms)


def fit_vocabulary(
    docs: list[TokenSeq | list[str]], n_min: int = 1, n_max: int = 3
) -> TfidfVocabulary:
    """Vocabulary over every observed n-gram, indexed in lexicographic order."""
    if not docs:
        raise EmptyCorpus("cannot fit a vocabulary on zero documents")
    df_counts: dict[str, int] = {}
    for doc in docs:
        for term in set(ngrams(doc, n_min, n_max)):
            df_counts[term] = df_counts.get(term, 0) + 1
    terms = sorted(df_counts)
    return TfidfVocabulary(
        terms=terms,
        df=[df_counts[t] for t in terms],
        doc_count=len(docs),
        n_min=n_min,
        n_max=n_max,
    )


def vectorize(doc: TokenSeq | list[str], vocab: TfidfVocabulary) -> SparseVec:
    """tf * idf entries, L2-normalized; unseen terms are ignored."""
    vec: SparseVec = {}
    for term, count in ngrams(doc, vocab.n_min, vocab.n_max).items():
        idx = vocab.index.get(term)
        if idx is not None:
            vec[idx] = count * float(vocab.idf[idx])
    norm = math.sqrt(sum(v * v for v in vec.values()))
    if norm > 0:
        vec = {i: v / norm for i, v in vec.items()}
    return vec


@dataclass
class BeliefModel:
    vocabulary: TfidfVocabulary | None
    weights: np.ndarray
    bias: float
    config: dict = field(default_factory=dict)

    def decision(self, vec: SparseVec) -> float:
        w = self.weights
        return float(sum(w[i] * v for i, v in vec.items()) + self.bias)


def predict(model: BeliefModel, vec: SparseVec) -> str:
    return YES if model.decision(vec) >= 0 else NO


def train(
    vectors: list[SparseVec],
    labels: list[str],
    vocab: TfidfVocabulary | None = None,
    epochs: int = 20,
    learning_rate: float = 0.5,
    regularization: float = 1e-4,
    seed: int = 0,
    class_weighting: bool = True,
) -> BeliefModel:
    """Seeded SGD on the hinge loss; per-class weights default to
    inverse class frequency (belief is the rare class in practice).
    """
    if len(vectors) != len(labels):
        raise ValueError("vectors and labels must have equal length")
    n_yes = sum(1 for l in labels if l == YES)
    n_no = sum(1 for l in labels if l == NO)
    if n_yes == 0 or n_no == 0:
        raise SingleClassCorpus(f"need both classes, got yes={n_yes} no={n_no}")

    if vocab is not None:
        dim = len(vocab)
    else:
        dim = 1 + max((i for vec in vectors for i in vec), default=-1)
    w = np.zeros(dim, dtype=np.float64)
    b = 0.0
    n = len(vectors)
    if class_weighting:
        cw = {YES: n / (2.0 * n_yes), NO: n / (2.0 * n_no)}
    else:
        cw = {YES: 1.0, NO: 1.0}
    ys = [1.0 if l == YES else -1.0 for l in labels]

    rng = random.Random(seed)
    order = list(range(n))
    epoch_losses = []
    for epoch in range(epochs):
        rng.shuffle(order)
        eta = learning_rate / (1.0 + epoch)
        shrink = max(0.0, 1.0 - eta * regularization)
        for i in order:
            vec, y = vectors[i], ys[i]
            margin = y * (sum(w[j] * v for j, v in vec.items()) + b)
            w *= shrink
            if margin < 1.0:
                step = eta * cw[labels[i]] * y
                for j, v in vec.items():
                    w[j] += step * v
                b += step
        loss = 0.0
        for vec, y, lab in zip(vectors, ys, labels):
            margin = y * (sum(w[j] * v for j, v in vec.items()) + b)
            loss += cw[lab] * max(0.0, 1.0 - margin)
        epoch_losses.append(loss / n)

    return BeliefModel(
        vocabulary=vocab,
        weights=w,
        bias=b,
        config={
            "epochs": epochs,
            "learning_rate": learning_rate,
            "regularization": regularization,
            "seed": seed,
            "class_weighting": class_weighting,
            "epoch_losses": epoch_losses,
        },
    )


@dataclass
class EvalReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    tp: int
    fp: int
    fn: int
    tn: int

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "confusion": {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn},
        }


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def evaluate(model: BeliefModel, test: list[tuple[SparseVec, str]]) -> EvalReport:
    """Accuracy plus macro-averaged precision/recall over {yes, no}."""
    if not test:
        raise EmptyTestSet("cannot evaluate on an empty test set")
    tp = fp = fn = tn = 0
    for vec, label in test:
        pred = predict(model, vec)
        if pred == YES and label == YES:
            tp += 1
        elif pred == YES and label == NO:
            fp += 1
        elif pred == NO and label == YES:
            fn += 1
        else:
            tn += 1
    total = tp + fp + fn + tn
    precision_yes = _safe_div(tp, tp + fp)
    precision_no = _safe_div(tn, tn + fn)
    recall_yes = _safe_div(tp, tp + fn)
    recall_no = _safe_div(tn, tn + fp)
    return EvalReport(
        accuracy=(tp + tn) / total,
        macro_precision=(precision_yes + precision_no) / 2.0,
        macro_recall=(recall_yes + recall_no) / 2.0,
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
    )


def fit_and_train(
    docs: list[TokenSeq | list[str]],
    labels: list[str],
    n_min: int = 1,
    n_max: int = 3,
    **train_kwargs,
) -> BeliefModel:
    """Fit the vocabulary on the training docs and train on their vectors."""
    vocab = fit_vocabulary(docs, n_min, n_max)
    vectors = [vectorize(doc, vocab) for doc in docs]
    return train(vectors, labels, vocab=vocab, **train_kwargs)


def model_to_dict(model: BeliefModel) -> dict:
    vocab = model.vocabulary
    return {
        "vocabulary": {
            "terms": vocab.terms,
            "df": vocab.df,
            "doc_count": vocab.doc_count,
            "n_min": vocab.n_min,
            "n_max": vocab.n_max,
        },
        "idf": [float(v) for v in vocab.idf],
        "weights": [float(v) for v in model.weights],
        "bias": model.bias,
        "config": model.config,
    }


def model_from_dict(doc: dict) -> BeliefModel:
    v = doc["vocabulary"]
    vocab = TfidfVocabulary(
        terms=list(v["terms"]),
        df=list(v["df"]),
        doc_count=v["doc_count"],
        n_min=v["n_min"],
        n_max=v["n_max"],
    )
    return BeliefModel(
        vocabulary=vocab,
        weights=np.asarray(doc["weights"], dtype=np.float64),
        bias=float(doc["bias"]),
        config=dict(doc["config"]),
    )


def save_model(model: BeliefModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str) -> BeliefModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
