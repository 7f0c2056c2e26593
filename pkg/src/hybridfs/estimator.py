"""scikit-learn compatible wrappers around the selection pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted

from .data import partition_by_decision
from .evaluation import knn_classify
from .model import ModelMode
from .solvers import (
    DEFAULT_DELTA_GRID,
    SOLVERS,
    BlackHoleParams,
    best_sweep_point,
    delta_sweep,
    prepare_problem,
    solve,
)
from .validation import as_hybrid_table, as_records, check_delta, check_mask, check_sigma

__all__ = ["HybridFeatureSelector", "HybridKNNClassifier"]


class HybridFeatureSelector(SelectorMixin, BaseEstimator):
    """Select the fewest features that keep dissimilar classes apart.

    Cross-class object pairs whose Gaussian-kernel similarity (over the
    hybrid distance) is at most ``delta`` become covering constraints; the
    smallest feature subset that keeps every such pair at least that
    dissimilar is returned.

    Parameters
    ----------
    attributes : Schema or sequence of Attribute, default=None
        Column descriptors. ``None`` treats every column as real-valued.
    sigma : float, default=0.2
        Kernel width.
    delta : float or "sweep", default="sweep"
        Similarity threshold in [0, 1). ``"sweep"`` tries 0.0, 0.1, ..., 0.9
        and keeps the smallest non-empty feasible subset (larger delta on ties).
    mode : {"normal", "optimistic"}, default="normal"
        Filter pairs by the kernel relation or by its upper approximation.
    solver : {"exact", "greedy", "blackhole"}, default="exact"
    population, max_iterations : int
        Black-hole search settings.
    random_state : int, default=0
        Seed of the black-hole search.
    max_exact_features : int, default=25
        Refuse exact enumeration beyond this many features.

    Attributes
    ----------
    support_ : ndarray of bool, shape (n_features,)
    result_ : SolveResult
    model_ : SelectionModel
    delta_ : float
        The threshold that produced ``result_``.
    sweep_ : list of SweepPoint or None
    n_features_in_ : int
    feature_names_in_ : ndarray of str
        Only set when ``X`` has column names.
    """

    def __init__(
        self,
        attributes=None,
        sigma=0.2,
        delta="sweep",
        mode="normal",
        solver="exact",
        population=30,
        max_iterations=500,
        random_state=0,
        max_exact_features=25,
    ):
        self.attributes = attributes
        self.sigma = sigma
        self.delta = delta
        self.mode = mode
        self.solver = solver
        self.population = population
        self.max_iterations = max_iterations
        self.random_state = random_state
        self.max_exact_features = max_exact_features

    def _params(self) -> BlackHoleParams:
        return BlackHoleParams(
            population=self.population,
            max_iterations=self.max_iterations,
            seed=0 if self.random_state is None else int(self.random_state),
        )

    def fit(self, X, y=None):
        sigma = check_sigma(self.sigma)
        mode = ModelMode(self.mode)
        if self.solver not in SOLVERS:
            raise ValueError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        his = as_hybrid_table(X, y, self.attributes)
        if partition_by_decision(his).r < 2:
            raise ValueError("at least two decision classes are required")
        problem = prepare_problem(his, sigma, mode)
        params = self._params()

        if isinstance(self.delta, str):
            if self.delta != "sweep":
                raise ValueError(f"delta must be a number or 'sweep', got {self.delta!r}")
            self.sweep_ = delta_sweep(problem, DEFAULT_DELTA_GRID, self.solver, params, self.max_exact_features)
            best = best_sweep_point(self.sweep_)
            if best is None:
                raise ValueError("no delta in the sweep produced a usable feature subset")
            self.delta_, self.model_, self.result_ = best.delta, best.model, best.result
        else:
            self.delta_ = check_delta(self.delta)
            self.sweep_ = None
            self.model_ = problem.model(self.delta_)
            self.result_ = solve(self.model_, self.solver, params, self.max_exact_features)

        self.support_ = self.result_.mask.astype(bool)
        self.n_features_in_ = his.m
        if hasattr(X, "columns"):
            self.feature_names_in_ = np.asarray([str(c) for c in X.columns], dtype=object)
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_

    def transform(self, X):
        check_is_fitted(self, "support_")
        arr = X.to_numpy(dtype=object) if hasattr(X, "to_numpy") else np.asarray(X, dtype=object)
        if arr.ndim != 2 or arr.shape[1] != self.n_features_in_:
            raise ValueError(f"X must have {self.n_features_in_} columns")
        out = arr[:, self.support_]
        try:
            return out.astype(float)
        except (TypeError, ValueError):
            return out


class HybridKNNClassifier(ClassifierMixin, BaseEstimator):
    """k-nearest-neighbour classifier over the hybrid distance.

    Scale statistics come from the training data only.
    """

    def __init__(self, attributes=None, n_neighbors=3, mask=None):
        self.attributes = attributes
        self.n_neighbors = n_neighbors
        self.mask = mask

    def fit(self, X, y=None):
        self.train_ = as_hybrid_table(X, y, self.attributes)
        self.n_features_in_ = self.train_.m
        if self.mask is None:
            self.mask_ = np.ones(self.train_.m, dtype=np.int8)
        else:
            self.mask_ = check_mask(self.mask, self.train_.m)
        self.classes_ = np.asarray(partition_by_decision(self.train_).labels, dtype=object)
        return self

    def predict(self, X):
        check_is_fitted(self, "train_")
        records = as_records(X, self.train_.attributes)
        return np.asarray(knn_classify(self.train_, records, self.mask_, self.n_neighbors), dtype=object)
