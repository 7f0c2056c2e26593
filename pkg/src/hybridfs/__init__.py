"""Feature selection for mixed-type tables via hybrid distances and Gaussian fuzzy relations."""

__version__ = "0.1.0"

from .data import (
    Attribute,
    AttributeKind,
    DataError,
    HybridInformationSystem,
    Schema,
    SchemaError,
    cross_class_pairs,
    load_dataset,
    load_schema,
    parse_schema,
    partition_by_decision,
    read_dataset,
    to_csv,
)
from .distance import compute_stats, decompose, hd_matrix
from .estimator import HybridFeatureSelector, HybridKNNClassifier
from .evaluation import evaluate_subset, knn_classify, metrics
from .linguistic import TermTable, TrapezoidalFuzzyNumber, centroid, membership
from .model import ModelMode, SelectionModel, build_model, is_feasible
from .relation import gaussian_relation, lower_relation, upper_relation
from .solvers import BlackHoleParams, prepare_problem, solve, solve_blackhole, solve_exact, solve_greedy

__all__ = [
    "Attribute",
    "AttributeKind",
    "BlackHoleParams",
    "DataError",
    "HybridFeatureSelector",
    "HybridInformationSystem",
    "HybridKNNClassifier",
    "ModelMode",
    "Schema",
    "SchemaError",
    "SelectionModel",
    "TermTable",
    "TrapezoidalFuzzyNumber",
    "build_model",
    "centroid",
    "compute_stats",
    "cross_class_pairs",
    "decompose",
    "evaluate_subset",
    "gaussian_relation",
    "hd_matrix",
    "is_feasible",
    "knn_classify",
    "load_dataset",
    "load_schema",
    "lower_relation",
    "membership",
    "metrics",
    "parse_schema",
    "partition_by_decision",
    "prepare_problem",
    "read_dataset",
    "solve",
    "solve_blackhole",
    "solve_exact",
    "solve_greedy",
    "to_csv",
    "upper_relation",
]
