import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.metrics import matthews_corrcoef

from hybridfs.data import Attribute, HybridInformationSystem
from hybridfs.evaluation import (
    UNDEFINED,
    ConfusionMatrix,
    MetricReport,
    confusion,
    confusion_table,
    evaluate_subset,
    kfold_split,
    knn_classify,
    metrics,
)

from helpers import oracle_knn_accuracy, random_table

seeds = st.integers(0, 2**32 - 1)


def test_reference_confusion_matrix():
    rep = metrics(ConfusionMatrix(tp=50, fp=10, fn=5, tn=35))
    assert rep.accuracy == pytest.approx(0.85, abs=1e-12)
    assert rep.precision == pytest.approx(50 / 60, abs=1e-12)
    assert rep.recall == pytest.approx(50 / 55, abs=1e-12)
    assert rep.mcc == pytest.approx(1700 / np.sqrt(60 * 55 * 45 * 40), abs=1e-12)
    assert rep.mcc == pytest.approx(0.697518, abs=1e-6)


def test_undefined_metrics_serialize_as_dash():
    rep = metrics(ConfusionMatrix(tp=0, fp=0, fn=3, tn=2))
    assert rep.precision is None and rep.mcc is None
    assert rep.recall == 0.0
    data = rep.to_dict()
    assert data["precision"] == UNDEFINED == "-" and data["mcc"] == "-"
    with pytest.raises(ValueError):
        metrics(ConfusionMatrix(0, 0, 0, 0))
    with pytest.raises(ValueError):
        ConfusionMatrix(-1, 0, 0, 0)


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_mcc_bounded_and_matches_reference(tp, fp, fn, tn):
    if tp + fp + fn + tn == 0:
        return
    rep = metrics(ConfusionMatrix(tp, fp, fn, tn))
    assert 0.0 <= rep.accuracy <= 1.0
    if rep.mcc is not None:
        assert -1.0 - 1e-12 <= rep.mcc <= 1.0 + 1e-12
        actual = [1] * (tp + fn) + [0] * (fp + tn)
        predicted = [1] * tp + [0] * fn + [1] * fp + [0] * tn
        assert rep.mcc == pytest.approx(matthews_corrcoef(actual, predicted), abs=1e-9)


def test_confusion_counts():
    actual = ["a", "a", "b", "b", "b"]
    pred = ["a", "b", "b", "a", "b"]
    assert confusion(actual, pred, "a") == ConfusionMatrix(1, 1, 1, 2)
    # A fold can lack the positive class entirely.
    assert confusion(actual, pred, "z") == ConfusionMatrix(0, 0, 0, 5)
    table, labels = confusion_table(actual, pred)
    assert labels == ["a", "b"] and table.tolist() == [[1, 1], [1, 2]]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 60), st.integers(2, 10), seeds)
def test_kfold_is_a_balanced_partition(n, k, seed):
    if k > n:
        with pytest.raises(ValueError):
            kfold_split(n, k, seed)
        return
    folds = kfold_split(n, k, seed)
    assert len(folds) == k
    assert sorted(np.concatenate(folds).tolist()) == list(range(n))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1
    assert all(np.array_equal(a, b) for a, b in zip(folds, kfold_split(n, k, seed)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from("abc"), min_size=5, max_size=60), st.integers(2, 5), seeds)
def test_stratified_folds_spread_each_class(labels, k, seed):
    n = len(labels)
    if k > n:
        return
    folds = kfold_split(n, k, seed, labels)
    assert sorted(np.concatenate(folds).tolist()) == list(range(n))
    for cls in set(labels):
        counts = [sum(labels[i] == cls for i in f) for f in folds]
        assert max(counts) - min(counts) <= 1


def test_kfold_argument_checks():
    with pytest.raises(ValueError):
        kfold_split(10, 1)
    with pytest.raises(ValueError):
        kfold_split(10, 2, labels=["a"] * 9)


def test_flu_full_mask_regression(flu):
    rep = evaluate_subset(flu, [1, 1, 1, 1], k_folds=5, knn_k=3, seed=0)
    folds = kfold_split(flu.n, 5, 0, flu.decision)
    assert rep.accuracy == pytest.approx(oracle_knn_accuracy(flu, folds, 3), abs=1e-12)
    assert rep.accuracy == pytest.approx(0.3, abs=1e-12)
    assert rep.precision is None and rep.folds == 5


def test_binary_metrics_and_positive_label(flu):
    two = flu.subset([0, 1, 2, 3, 4])
    rep = evaluate_subset(two, [1, 1, 1, 1], k_folds=2, knn_k=1, seed=0)
    assert rep.to_dict() == {
        "accuracy": pytest.approx(5 / 12), "precision": 0.5, "recall": 0.75,
        "mcc": -0.5, "folds": 2, "undefined_folds": 1,
    }
    flipped = evaluate_subset(two, [1, 1, 1, 1], k_folds=2, knn_k=1, seed=0, positive_label="Rhinitis")
    assert flipped.accuracy == rep.accuracy
    with pytest.raises(ValueError):
        evaluate_subset(two, [1, 1, 1, 1], 2, 1, 0, positive_label="Health")
    with pytest.raises(ValueError):
        evaluate_subset(flu, [1, 1, 1, 1], positive_label="Flu")


def test_evaluation_argument_checks(flu):
    with pytest.raises(ValueError):
        evaluate_subset(flu, [0, 0, 0, 0])
    with pytest.raises(ValueError):
        evaluate_subset(flu, [1, 1])
    with pytest.raises(ValueError):
        evaluate_subset(flu.subset([0, 3]), [1, 1, 1, 1], k_folds=2)


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(6, 14), st.integers(1, 4), st.integers(2, 4), st.integers(1, 4))
def test_accuracy_matches_oracle_with_training_fold_statistics(seed, n, m, k_folds, knn_k):
    his = random_table(np.random.default_rng(seed), n, m)
    folds = kfold_split(n, k_folds, seed, his.decision)
    if any(n - len(f) < 2 for f in folds):
        return
    rep = evaluate_subset(his, np.ones(m, dtype=int), k_folds, knn_k, seed)
    assert rep.accuracy == pytest.approx(oracle_knn_accuracy(his, folds, knn_k), abs=1e-12)


def test_test_fold_does_not_leak_into_statistics():
    # An extreme test value must not change predictions when it only shifts the test fold.
    attrs = [Attribute("x", "real")]
    train = HybridInformationSystem(attrs, [(0.0,), (1.0,), (10.0,), (11.0,)], ["a", "a", "b", "b"])
    near = knn_classify(train, [(0.4,)], [1], k=1)
    assert near == ["a"]
    assert knn_classify(train, [(1e9,)], [1], k=3) == ["b"]


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(6, 12), st.integers(1, 4))
def test_prediction_ignores_training_row_permutation_without_ties(seed, n, m):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, m))
    attrs = [Attribute(f"x{k}", "real") for k in range(m)]
    labels = ["a", "b"] * (n // 2) + ["a"] * (n % 2)
    train = HybridInformationSystem(attrs, X.tolist(), labels)
    perm = rng.permutation(n)
    shuffled = train.subset(perm)
    queries = rng.normal(size=(5, m)).tolist()
    assert knn_classify(train, queries, [1] * m, 1) == knn_classify(shuffled, queries, [1] * m, 1)


def test_vote_ties_prefer_nearest_then_first_class():
    attrs = [Attribute("x", "real")]
    train = HybridInformationSystem(attrs, [(0.0,), (3.0,), (1.0,), (5.0,)], ["a", "b", "b", "a"])
    # k=2 from 0.9: neighbours 1.0 (b) and 0.0 (a) -> 1-1 tie, b is closer.
    assert knn_classify(train, [(0.9,)], [1], k=2) == ["b"]
    # Equidistant tie: 0.5 is 0.5 from both 0.0 (a) and 1.0 (b); a appears first.
    assert knn_classify(train, [(0.5,)], [1], k=2) == ["a"]
    with pytest.raises(ValueError):
        knn_classify(train, [(0.5,)], [1], k=0)


def test_metric_report_defaults():
    assert MetricReport(0.5).to_dict()["mcc"] == "-"
