"""Cross-validated KNN scoring of feature subsets on mixed-kind data."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .data import HybridInformationSystem, partition_by_decision
from .distance import compute_stats, distances_between

__all__ = [
    "UNDEFINED",
    "ConfusionMatrix",
    "MetricReport",
    "kfold_split",
    "knn_classify",
    "confusion",
    "confusion_table",
    "metrics",
    "evaluate_subset",
]

# Serialized form of a metric whose denominator is zero.
UNDEFINED = "-"


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricReport:
    """Classification scores; ``None`` marks an undefined metric."""

    accuracy: float
    precision: float | None = None
    recall: float | None = None
    mcc: float | None = None
    folds: int = 1
    undefined_folds: int = 0

    def to_dict(self) -> dict[str, Any]:
        def show(v):
            return UNDEFINED if v is None else v

        return {
            "accuracy": self.accuracy,
            "precision": show(self.precision),
            "recall": show(self.recall),
            "mcc": show(self.mcc),
            "folds": self.folds,
            "undefined_folds": self.undefined_folds,
        }


def kfold_split(
    n: int, k: int, seed: int = 0, labels: Sequence[Any] | None = None
) -> list[np.ndarray]:
    """Seeded k-fold partition of ``range(n)``; stratified when ``labels`` is given.

    Objects are shuffled within each class, the classes are laid end to end
    and position ``t`` goes to fold ``t mod k``. Fold sizes therefore differ
    by at most one and every class is spread as evenly as its size allows.
    """
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ValueError(f"cannot split {n} objects into {k} folds")
    rng = np.random.default_rng(seed)
    if labels is None:
        order = rng.permutation(n)
    else:
        if len(labels) != n:
            raise ValueError("labels must have length n")
        groups: dict[Any, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        order = np.concatenate([rng.permutation(np.asarray(g)) for g in groups.values()])
    folds = [np.sort(order[f::k]) for f in range(k)]
    return folds


def _vote(neighbor_labels: Sequence[str], neighbor_dist: np.ndarray, class_order: dict[str, int]) -> str:
    counts: dict[str, int] = {}
    nearest: dict[str, float] = {}
    for lab, d in zip(neighbor_labels, neighbor_dist):
        counts[lab] = counts.get(lab, 0) + 1
        nearest[lab] = min(nearest.get(lab, math.inf), float(d))
    return min(counts, key=lambda lab: (-counts[lab], nearest[lab], class_order[lab]))


def knn_classify(
    train: HybridInformationSystem,
    test: HybridInformationSystem | Sequence[Sequence[Any]],
    mask: Sequence[int],
    k: int = 3,
) -> list[str]:
    """Label ``test`` objects by majority vote of their ``k`` nearest training objects.

    ``test`` is a table or a sequence of typed records. Distances use only the features selected by ``mask`` and scale
    statistics from ``train``. Equal distances rank the smaller training
    index first; a tied vote goes to the class with the closest member, then
    to the class seen first in ``train``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    chi = np.asarray(mask)
    if chi.shape != (train.m,):
        raise ValueError(f"mask must have length {train.m}, got shape {chi.shape}")
    features = np.flatnonzero(chi)
    if features.size == 0:
        raise ValueError("mask selects no features")
    if train.n == 0:
        raise ValueError("training fold is empty")
    stats = compute_stats(train)
    dist = distances_between(test, train, stats, features)
    k_eff = min(k, train.n)
    class_order = {lab: j for j, lab in enumerate(train.class_index)}
    labels = np.asarray(train.decision, dtype=object)
    preds = []
    for row in dist:
        nn = np.argsort(row, kind="stable")[:k_eff]
        preds.append(_vote(labels[nn].tolist(), row[nn], class_order))
    return preds


def confusion(actual: Sequence[str], predicted: Sequence[str], positive_label: str) -> ConfusionMatrix:
    if len(actual) != len(predicted):
        raise ValueError("actual and predicted must have equal length")
    tp = fp = fn = tn = 0
    for a, p in zip(actual, predicted):
        if p == positive_label:
            if a == positive_label:
                tp += 1
            else:
                fp += 1
        elif a == positive_label:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def confusion_table(
    actual: Sequence[str], predicted: Sequence[str], labels: Sequence[str] | None = None
) -> tuple[np.ndarray, list[str]]:
    """Multiclass count table ``table[actual, predicted]`` and its label order."""
    if len(actual) != len(predicted):
        raise ValueError("actual and predicted must have equal length")
    if labels is None:
        labels = list(dict.fromkeys([*actual, *predicted]))
    pos = {lab: i for i, lab in enumerate(labels)}
    table = np.zeros((len(labels), len(labels)), dtype=int)
    for a, p in zip(actual, predicted):
        table[pos[a], pos[p]] += 1
    return table, list(labels)


def metrics(cm: ConfusionMatrix) -> MetricReport:
    """Accuracy, precision, recall and Matthews correlation of a binary confusion matrix."""
    tp, fp, fn, tn = cm.tp, cm.fp, cm.fn, cm.tn
    total = cm.total
    if total == 0:
        raise ValueError("empty confusion matrix")
    accuracy = (tp + tn) / total
    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else None
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc = (tp * tn - fp * fn) / math.sqrt(denom) if denom else None
    return MetricReport(accuracy, precision, recall, mcc)


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def evaluate_subset(
    his: HybridInformationSystem,
    mask: Sequence[int],
    k_folds: int = 5,
    knn_k: int = 3,
    seed: int = 0,
    positive_label: str | None = None,
    stratified: bool = True,
) -> MetricReport:
    """Mean test-fold metrics of KNN restricted to ``mask``.

    Accuracy is reported for any number of classes. Precision, recall and
    MCC need two classes; ``positive_label`` defaults to the first class in
    row order. Folds where a binary metric is undefined are left out of that
    metric's average and counted in ``undefined_folds``.
    """
    chi = np.asarray(mask)
    if chi.shape != (his.m,):
        raise ValueError(f"mask must have length {his.m}, got shape {chi.shape}")
    if not chi.any():
        raise ValueError("mask selects no features")
    labels = list(partition_by_decision(his).labels)
    binary = len(labels) == 2
    if positive_label is not None and not binary:
        raise ValueError("precision, recall and MCC are only defined for two-class data")
    if binary and positive_label is None:
        positive_label = labels[0]
    if binary and positive_label not in labels:
        raise ValueError(f"positive label {positive_label!r} is not a class label")

    folds = kfold_split(his.n, k_folds, seed, his.decision if stratified else None)
    acc, prec, rec, mcc = [], [], [], []
    undefined = 0
    everyone = np.arange(his.n)
    for test_idx in folds:
        train_idx = np.setdiff1d(everyone, test_idx)
        if train_idx.size < 2:
            raise ValueError("every training fold needs at least 2 objects; use fewer folds")
        train = his.subset(train_idx)
        pred = knn_classify(train, [his.records[i] for i in test_idx], chi, knn_k)
        actual = [his.decision[i] for i in test_idx]
        acc.append(sum(a == p for a, p in zip(actual, pred)) / len(actual))
        if binary:
            rep = metrics(confusion(actual, pred, positive_label))
            if None in (rep.precision, rep.recall, rep.mcc):
                undefined += 1
            for bucket, value in ((prec, rep.precision), (rec, rep.recall), (mcc, rep.mcc)):
                if value is not None:
                    bucket.append(value)
    return MetricReport(
        accuracy=_mean(acc),
        precision=_mean(prec),
        recall=_mean(rec),
        mcc=_mean(mcc),
        folds=len(folds),
        undefined_folds=undefined,
    )
