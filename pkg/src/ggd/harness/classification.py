"""Graph classification from GGD distances: nearest neighbours and a kernel SVM."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.model_selection import StratifiedKFold
from sklearn.svm import SVC

from ..distance import GgdParams
from ..graph import Graph
from .experiments import cross_distances, distance_matrix, kernel_from_distances

GAMMA_GRID = (0.01, 0.05, 0.1)


@dataclass
class ClassificationReport:
    predictions: np.ndarray
    accuracy: float | None = None
    method: str = "knn"
    details: dict = field(default_factory=dict)


def _knn_predict(d_test_train: np.ndarray, y_train: np.ndarray, k: int) -> np.ndarray:
    classes = np.unique(y_train)
    out = np.empty(d_test_train.shape[0], dtype=y_train.dtype)
    for r, row in enumerate(d_test_train):
        # stable sort keeps training order among equal distances
        nn = np.argsort(row, kind="stable")[:k]
        votes = np.array([(y_train[nn] == c).sum() for c in classes])
        out[r] = classes[np.argmax(votes)]  # ties resolve to the smallest label
    return out


def _svm_fit_predict(d_train, y_train, d_test_train, gamma, c):
    clf = SVC(kernel="precomputed", C=c, decision_function_shape="ovo")
    clf.fit(kernel_from_distances(d_train, gamma), y_train)
    return clf.predict(kernel_from_distances(d_test_train, gamma))


def select_gamma(d_train: np.ndarray, y_train: np.ndarray, grid=GAMMA_GRID, c: float = 1.0,
                 folds: int = 5, seed: int = 0) -> tuple[float, dict]:
    """Cross-validated kernel width; ties go to the smaller gamma."""
    n_splits = min(folds, int(np.min(np.unique(y_train, return_counts=True)[1])))
    if n_splits < 2:
        return grid[0], {}
    skf = StratifiedKFold(n_splits=n_splits, shuffle=True, random_state=seed)
    scores = {}
    for gamma in grid:
        acc = []
        for tr, va in skf.split(np.zeros(len(y_train)), y_train):
            pred = _svm_fit_predict(d_train[np.ix_(tr, tr)], y_train[tr],
                                    d_train[np.ix_(va, tr)], gamma, c)
            acc.append(np.mean(pred == y_train[va]))
        scores[gamma] = float(np.mean(acc))
    best = max(grid, key=lambda g: (scores[g], -g))
    return best, scores


def classify_from_distances(d_train: np.ndarray, y_train, d_test_train: np.ndarray,
                            y_test=None, method: str = "knn", k: int = 1,
                            gamma: float | None = None, c: float = 1.0,
                            seed: int = 0) -> ClassificationReport:
    """Classify from precomputed distances.

    ``d_train`` is train x train, ``d_test_train`` is test x train.  With
    ``method="svm"`` and ``gamma=None`` the kernel width is chosen by
    cross-validation over 0.01, 0.05 and 0.1.
    """
    y_train = np.asarray(y_train)
    if len(y_train) == 0:
        raise ValueError("empty training set")
    d_test_train = np.atleast_2d(np.asarray(d_test_train, dtype=np.float64))
    details: dict = {}
    if method == "knn":
        if k < 1:
            raise ValueError("k must be positive")
        pred = _knn_predict(d_test_train, y_train, k)
        details["k"] = k
    elif method == "svm":
        if len(np.unique(y_train)) < 2:
            raise ValueError("SVM training needs at least two classes")
        d_train = np.asarray(d_train, dtype=np.float64)
        if gamma is None:
            gamma, scores = select_gamma(d_train, y_train, c=c, seed=seed)
            details["cv_scores"] = scores
        pred = _svm_fit_predict(d_train, y_train, d_test_train, gamma, c)
        details.update(gamma=gamma, C=c)
    else:
        raise ValueError(f"unknown method {method!r}")
    acc = None
    if y_test is not None:
        y_test = np.asarray(y_test)
        acc = float(np.mean(pred == y_test)) if len(y_test) else float("nan")
    return ClassificationReport(pred, acc, method, details)


def classify(train: list[Graph], train_labels, test: list[Graph], test_labels=None,
             params: GgdParams | None = None, method: str = "knn", k: int = 1,
             gamma: float | None = None, c: float = 1.0, workers: int | None = 1,
             seed: int = 0) -> ClassificationReport:
    """Predict labels of ``test`` graphs from labelled ``train`` graphs via GGD."""
    if not train:
        raise ValueError("empty training set")
    d_test_train = cross_distances(test, train, params, workers)
    d_train = distance_matrix(train, params, workers).values if method == "svm" else None
    return classify_from_distances(d_train, train_labels, d_test_train, test_labels,
                                   method, k, gamma, c, seed)


def split_indices(n: int, test_fraction: float, rng: np.random.Generator,
                  labels=None) -> tuple[np.ndarray, np.ndarray]:
    """Random train/test split; stratified when ``labels`` are given."""
    if labels is None:
        perm = rng.permutation(n)
        n_test = max(1, int(round(test_fraction * n)))
        return np.sort(perm[n_test:]), np.sort(perm[:n_test])
    labels = np.asarray(labels)
    test = []
    for c in np.unique(labels):
        idx = rng.permutation(np.nonzero(labels == c)[0])
        test.extend(idx[:max(1, int(round(test_fraction * len(idx))))])
    test = np.sort(np.asarray(test))
    return np.setdiff1d(np.arange(n), test), test


def repeated_split_accuracy(d: np.ndarray, labels, trials: int = 5, test_fraction: float = 0.1,
                            seed: int = 0, method: str = "knn", k: int = 1,
                            gamma: float | None = None, c: float = 1.0) -> list[float]:
    """Accuracy over seeded random splits of a precomputed distance matrix."""
    labels = np.asarray(labels)
    accs = []
    for t, s in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        tr, te = split_indices(len(labels), test_fraction, np.random.default_rng(s), labels)
        rep = classify_from_distances(d[np.ix_(tr, tr)], labels[tr], d[np.ix_(te, tr)],
                                      labels[te], method, k, gamma, c, seed=seed + t)
        accs.append(rep.accuracy)
    return accs
