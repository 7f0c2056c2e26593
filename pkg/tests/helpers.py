"""Shared fixtures-by-function: random tables and a straight-line distance oracle."""

import itertools
import math
import statistics

import numpy as np

from hybridfs.data import Attribute, AttributeKind, HybridInformationSystem
from hybridfs.linguistic import TermTable

TERMS = TermTable({"Low": (0, 1, 1, 3), "Mid": (2, 4, 6, 6), "High": (4, 7, 10, 10)})
KINDS = ("boolean", "categorical", "real", "set", "linguistic")

# The kernel relation exactly as printed in the worked example (upper triangle mirrored).
PRINTED_RG_UPPER = [
    [1, 0.99, 0.15, 0.98, 0.08, 0.11, 0.90],
    [0, 1, 0.14, 0.55, 0.07, 0.09, 0.51],
    [0, 0, 1, 0.07, 0.21, 0.18, 0.08],
    [0, 0, 0, 1, 0.16, 0.10, 0.25],
    [0, 0, 0, 0, 1, 0.71, 0.06],
    [0, 0, 0, 0, 0, 1, 0.13],
    [0, 0, 0, 0, 0, 0, 1],
]
PRINTED_UPPER_UPPER = [
    [1, 0.99, 0.15, 0.98, 0.16, 0.12, 0.90],
    [0, 1, 0.15, 0.97, 0.9, 0.11, 0.89],
    [0, 0, 1, 0.15, 0.21, 0.18, 0.14],
    [0, 0, 0, 1, 0.16, 0.11, 0.88],
    [0, 0, 0, 0, 1, 0.71, 0.09],
    [0, 0, 0, 0, 0, 1, 0.13],
    [0, 0, 0, 0, 0, 0, 1],
]
PRINTED_HD_ROW1 = [0, 0.07, 1.23, 0.09, 1.39, 1.32, 0.28]


def symmetric(upper):
    a = np.asarray(upper, dtype=float)
    return np.triu(a) + np.triu(a, 1).T


def random_table(rng, n, m, n_classes=None, kinds=KINDS):
    """Random mixed-kind table with at least two classes."""
    attrs, cols = [], []
    for k in range(m):
        kind = str(rng.choice(kinds))
        name = f"a{k}"
        if kind == "linguistic":
            attrs.append(Attribute(name, kind, terms=TERMS))
            cols.append([str(v) for v in rng.choice(list(TERMS), n)])
        elif kind == "boolean":
            attrs.append(Attribute(name, kind))
            cols.append([bool(v) for v in rng.integers(0, 2, n)])
        elif kind == "categorical":
            attrs.append(Attribute(name, kind))
            cols.append([str(v) for v in rng.choice(list("xyz"), n)])
        elif kind == "real":
            attrs.append(Attribute(name, kind))
            cols.append([float(v) for v in np.round(rng.normal(size=n), 2)])
        else:
            attrs.append(Attribute(name, kind))
            cols.append([
                frozenset(rng.choice(list("ABCD"), int(rng.integers(1, 4)), replace=False).tolist())
                for _ in range(n)
            ])
    r = n_classes or int(rng.integers(2, 4))
    labels = [f"c{v}" for v in rng.integers(0, r, n)]
    if len(set(labels)) < 2:
        labels[0], labels[1] = "c0", "c1"
    return HybridInformationSystem(attrs, list(zip(*cols)), labels)


def oracle_sq(his, i, j):
    """Squared attribute distances of objects i and j, re-derived value by value."""
    out = []
    for k, attr in enumerate(his.attributes):
        u, v = his.records[i][k], his.records[j][k]
        col = [rec[k] for rec in his.records]
        if attr.kind in (AttributeKind.BOOLEAN, AttributeKind.CATEGORICAL):
            d = 0.0 if u == v else 1.0
        elif attr.kind is AttributeKind.REAL:
            s = statistics.stdev(col)
            d = 0.0 if s == 0 else abs(u - v) / (4 * s)
        elif attr.kind is AttributeKind.LINGUISTIC:
            cent = {lab: (3 * t.a + t.b + 3 * t.c + 2 * t.d) / 9 for lab, t in attr.terms.items()}
            s = statistics.stdev([cent[x] for x in col])
            d = 0.0 if s == 0 else abs(cent[u] - cent[v]) / (4 * s)
        else:
            s = max(len(x) for x in col)
            d = 1 - len(u & v) / s
        out.append(d * d)
    return out


def oracle_hd(his):
    n = his.n
    hd = [[0.0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        hd[i][j] = hd[j][i] = math.sqrt(sum(oracle_sq(his, i, j)))
    return hd


def brute_force_optimum(rows, theta, eps=1e-9):
    """Smallest feasible subset size by trying every mask."""
    p = len(rows[0]) if len(rows) else 0
    best = None
    for bits in itertools.product((0, 1), repeat=p):
        if all(sum(b * c for b, c in zip(bits, row)) >= theta - eps for row in rows):
            size = sum(bits)
            if best is None or size < best:
                best = size
    return best


def oracle_knn_accuracy(his, folds, k):
    """Fold-averaged k-NN accuracy with scale statistics from each training fold only."""
    scores = []
    for test in folds:
        train = [i for i in range(his.n) if i not in set(test.tolist())]
        rows = [his.records[i] for i in train]
        hits = 0
        for t in test:
            dists = []
            for pos, i in enumerate(train):
                total = 0.0
                for kk, attr in enumerate(his.attributes):
                    u, v = his.records[t][kk], his.records[i][kk]
                    col = [r[kk] for r in rows]
                    if attr.kind in (AttributeKind.BOOLEAN, AttributeKind.CATEGORICAL):
                        d = 0.0 if u == v else 1.0
                    elif attr.kind in (AttributeKind.REAL, AttributeKind.LINGUISTIC):
                        f = (lambda x: attr.terms.centroid_of(x)) if attr.kind is AttributeKind.LINGUISTIC else float
                        s = statistics.stdev([f(x) for x in col])
                        d = 0.0 if s == 0 else abs(f(u) - f(v)) / (4 * s)
                    else:
                        d = 1 - len(u & v) / max(len(x) for x in col)
                    total += d * d
                dists.append((math.sqrt(total), pos))
            nearest = sorted(dists)[:k]
            votes = {}
            for d, pos in nearest:
                lab = his.decision[train[pos]]
                count, best = votes.get(lab, (0, math.inf))
                votes[lab] = (count + 1, min(best, d))
            first_seen = {lab: train_pos for train_pos, lab in reversed(list(enumerate(his.decision[i] for i in train)))}
            pred = min(votes, key=lambda lab: (-votes[lab][0], votes[lab][1], first_seen[lab]))
            hits += pred == his.decision[t]
        scores.append(hits / len(test))
    return sum(scores) / len(scores)
