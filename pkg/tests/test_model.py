import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridfs.data import cross_class_pairs, partition_by_decision
from hybridfs.distance import compute_stats, decompose
from hybridfs.model import (
    SelectionModel,
    build_model,
    is_feasible,
    objective,
    prune_dominated_rows,
    split_g1_g2,
    threshold,
    violated_rows,
)
from hybridfs.relation import gaussian_relation
from hybridfs.solvers import prepare_problem, solve_exact

from helpers import PRINTED_RG_UPPER, brute_force_optimum, random_table, symmetric

SIGMA = math.sqrt(0.4)
seeds = st.integers(0, 2**32 - 1)
deltas = st.sampled_from([0.1, 0.3, 0.5, 0.7, 0.85, 0.9])


def test_threshold_values():
    assert threshold(SIGMA, 0.85) == pytest.approx(0.13001514, abs=1e-8)
    assert threshold(1.0, 1.0) == 0.0
    assert threshold(1.0, 0.0) == math.inf
    with pytest.raises(ValueError):
        threshold(1.0, 1.5)
    with pytest.raises(ValueError):
        threshold(0.0, 0.5)


@given(st.floats(0.01, 5), st.floats(0.001, 0.999), st.floats(0.001, 0.999))
def test_threshold_decreases_with_delta(sigma, d1, d2):
    lo, hi = sorted((d1, d2))
    assert threshold(sigma, hi) <= threshold(sigma, lo)


def test_printed_relation_split(flu):
    pairs = cross_class_pairs(partition_by_decision(flu))
    g1, g2 = split_g1_g2(symmetric(PRINTED_RG_UPPER), pairs, 0.85)
    assert g2 == [(0, 3), (0, 6)]
    assert len(g1) == 14
    assert sorted(g1 + g2) == pairs


def test_recomputed_relation_split(flu):
    problem = prepare_problem(flu, SIGMA)
    _, g2 = split_g1_g2(problem.relation, problem.pairs, 0.85)
    assert g2 == [(0, 3), (0, 6), (1, 3), (1, 6), (3, 6)]
    model = problem.model(0.85)
    assert model.n_rows == 11
    assert model.feature_names == ("illness_rate", "pain", "fever", "syndrome")


def test_flu_model_feasible_masks(flu):
    model = prepare_problem(flu, SIGMA).model(0.85)
    assert brute_force_optimum(model.rows.tolist(), model.theta) == 2
    feasible_pairs = [
        mask for mask in ([int(k in (a, b)) for k in range(4)] for a in range(4) for b in range(a + 1, 4))
        if is_feasible(model, mask)[0]
    ]
    assert feasible_pairs == [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]
    ok, bad = is_feasible(model, [0, 0, 0, 1])
    assert not ok and bad == violated_rows(model, [0, 0, 0, 1]) and bad


def test_ties_on_the_threshold_are_constrained():
    R = np.array([[1.0, 0.5], [0.5, 1.0]])
    assert split_g1_g2(R, [(0, 1)], 0.5) == ([(0, 1)], [])
    with pytest.raises(ValueError):
        split_g1_g2(np.full((2, 2), np.nan), [(0, 1)], 0.5)


def test_degenerate_deltas(flu):
    problem = prepare_problem(flu, SIGMA)
    zero = problem.model(0.0)
    assert zero.degenerate and zero.n_rows == 0 and zero.theta == math.inf
    one = problem.model(1.0)
    assert one.degenerate and one.n_rows == 16 and one.theta == 0.0
    assert not problem.model(0.5).degenerate


def test_model_json_round_trip(flu):
    model = prepare_problem(flu, SIGMA).model(0.85)
    data = json.loads(json.dumps(model.to_dict()))
    back = SelectionModel.from_dict(data)
    assert np.array_equal(back.rows, model.rows)
    assert back.theta == model.theta and back.pairs == model.pairs
    assert data["pairs"][0] == [0, 4]
    assert SelectionModel.from_dict(json.loads(json.dumps(prepare_problem(flu, SIGMA).model(0.0).to_dict()))).theta == math.inf


def test_model_validation():
    with pytest.raises(ValueError):
        SelectionModel(np.ones((2, 2)), 1.0, ((0, 1),), 0.5, 1.0)
    with pytest.raises(ValueError):
        SelectionModel(-np.ones((1, 2)), 1.0, ((0, 1),), 0.5, 1.0)
    model = SelectionModel(np.ones((1, 2)), 1.0, ((0, 1),), 0.5, 1.0)
    with pytest.raises(ValueError):
        is_feasible(model, [1, 2])
    with pytest.raises(ValueError):
        is_feasible(model, [1])
    assert objective([1, 0, 1]) == 2


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(3, 12), st.integers(1, 6), deltas, st.sampled_from([0.2, 0.4, 0.63]))
def test_all_features_always_satisfy_normal_model(seed, n, m, delta, sigma):
    his = random_table(np.random.default_rng(seed), n, m)
    model = prepare_problem(his, sigma).model(delta)
    assert is_feasible(model, np.ones(m, dtype=int))[0]


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(3, 12), st.integers(1, 6), deltas)
def test_optimistic_constraints_are_a_subset(seed, n, m, delta):
    his = random_table(np.random.default_rng(seed), n, m)
    normal = prepare_problem(his, 0.4, "normal").model(delta)
    optimistic = prepare_problem(his, 0.4, "optimistic").model(delta)
    assert set(optimistic.pairs) <= set(normal.pairs)
    assert optimistic.theta == normal.theta


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(3, 12), st.integers(1, 6), deltas)
def test_split_partitions_cross_pairs(seed, n, m, delta):
    his = random_table(np.random.default_rng(seed), n, m)
    problem = prepare_problem(his, 0.4)
    g1, g2 = split_g1_g2(problem.relation, problem.pairs, delta)
    assert sorted(g1 + g2) == list(problem.pairs)
    assert not set(g1) & set(g2)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(3, 12), st.integers(1, 6), deltas)
def test_build_model_rows_are_decomposition_rows(seed, n, m, delta):
    his = random_table(np.random.default_rng(seed), n, m)
    stats = compute_stats(his)
    pairs = cross_class_pairs(partition_by_decision(his))
    decomp = decompose(his, stats, pairs)
    R = gaussian_relation(decomp.hd, 0.4)
    model = build_model(decomp, R, pairs, delta, 0.4)
    for row, (i, j) in zip(model.rows, model.pairs):
        assert R[i, j] <= delta
        assert np.array_equal(row, decomp.row(i, j))


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(3, 12), st.integers(1, 7), deltas)
def test_pruning_keeps_the_optimum_and_feasible_set(seed, n, m, delta):
    his = random_table(np.random.default_rng(seed), n, m)
    model = prepare_problem(his, 0.4).model(delta)
    pruned = prune_dominated_rows(model)
    assert pruned.n_rows <= model.n_rows
    assert solve_exact(pruned).objective == solve_exact(model).objective
    rng = np.random.default_rng(seed)
    for mask in rng.integers(0, 2, size=(20, m)):
        assert is_feasible(pruned, mask)[0] == is_feasible(model, mask)[0]


def test_pruning_keeps_first_of_identical_rows():
    model = SelectionModel(np.array([[1.0, 2.0], [1.0, 2.0], [3.0, 2.0], [0.5, 5.0]]), 1.0,
                           ((0, 1), (0, 2), (0, 3), (1, 2)), 0.5, 1.0)
    pruned = prune_dominated_rows(model)
    assert pruned.pairs == ((0, 1), (1, 2))
