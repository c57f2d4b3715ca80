"""
Feature matrices, PCA, logistic regression and random forest classifiers, and
k-fold cross-validation.

Everything is deterministic given the seeds; forest trees draw from
independent streams keyed by (seed, tree index).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParameterError


@dataclass
class FeatureMatrix:
    X: np.ndarray
    y: np.ndarray
    column_names: list[str]
    featurization_id: str
    target: str = ""

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=int)
        if self.X.ndim != 2:
            raise DataError("X must be 2-D")
        if len(self.X) != len(self.y):
            raise DataError(f"X has {len(self.X)} rows but y has {len(self.y)} labels")
        if self.X.shape[1] != len(self.column_names):
            raise DataError("column_names does not match X width")
        if not np.all(np.isfinite(self.X)):
            raise DataError(f"feature matrix {self.featurization_id!r} contains NaN/Inf")


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str = "logreg"
    l2: float = 1e-4
    max_iters: int = 500
    lr: float = 1.0
    tol: float = 1e-6
    trees: int = 100
    max_depth: int | None = None
    min_leaf: int = 1
    features_per_split: int | None = None
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("logreg", "rforest"):
            raise ParameterError(f"unknown classifier kind {self.kind!r}")
        if self.l2 < 0 or self.max_iters < 1 or self.lr <= 0 or self.tol <= 0:
            raise ParameterError("logistic regression hyperparameters must be positive")
        if self.trees < 1 or self.min_leaf < 1:
            raise ParameterError("forest hyperparameters must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ParameterError("max_depth must be >= 1")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ParameterError("features_per_split must be >= 1")


@dataclass
class CvReport:
    featurization_id: str
    classifier_id: str
    fold_accuracies: list[float]
    target: str = ""
    mean: float = field(init=False)
    std: float = field(init=False)
    box_stats: tuple[float, float, float, float, float] = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.fold_accuracies, dtype=float)
        self.fold_accuracies = [float(v) for v in a]
        self.mean = float(a.mean())
        self.std = float(a.std())
        q1, med, q3 = np.percentile(a, [25, 50, 75])
        self.box_stats = (float(a.min()), float(q1), float(med), float(q3), float(a.max()))

    def to_dict(self) -> dict:
        mn, q1, med, q3, mx = self.box_stats
        return {
            "featurization_id": self.featurization_id,
            "classifier_id": self.classifier_id,
            "target": self.target,
            "folds": self.fold_accuracies,
            "mean": self.mean,
            "std": self.std,
            "box": {"min": mn, "q1": q1, "median": med, "q3": q3, "max": mx},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "CvReport":
        return cls(d["featurization_id"], d["classifier_id"], list(d["folds"]), d.get("target", ""))

    CSV_HEADER = ("target", "featurization", "classifier", "mean", "std",
                  "min", "q1", "median", "q3", "max", "folds")

    def csv_row(self) -> list[str]:
        return [self.target, self.featurization_id, self.classifier_id,
                *(repr(v) for v in (self.mean, self.std, *self.box_stats)),
                str(len(self.fold_accuracies))]


# ---------------------------------------------------------------------------
# folds and PCA

def kfold_indices(n: int, k: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    if k < 2 or k > n:
        raise ParameterError(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    out = []
    for i, test in enumerate(folds):
        train = np.concatenate([f for j, f in enumerate(folds) if j != i])
        out.append((np.sort(train), np.sort(test)))
    return out


class PCA:
    """Principal components from the eigendecomposition of the covariance."""

    def __init__(self, k: int):
        self.k = k

    def fit(self, X):
        X = np.asarray(X, dtype=float)
        if self.k > X.shape[1] or self.k < 1:
            raise ParameterError(f"cannot keep {self.k} components of {X.shape[1]} features")
        self.mean_ = X.mean(axis=0)
        Xc = X - self.mean_
        cov = Xc.T @ Xc / max(len(X) - 1, 1)
        w, V = np.linalg.eigh(cov)
        idx = np.argsort(w)[::-1][: self.k]
        comps = V[:, idx].T
        # each component's largest-magnitude entry made positive
        pivot = comps[np.arange(self.k), np.argmax(np.abs(comps), axis=1)]
        comps *= np.where(pivot < 0, -1.0, 1.0)[:, None]
        self.components_ = comps
        self.explained_variance_ = w[idx]
        return self

    def transform(self, X):
        return (np.asarray(X, dtype=float) - self.mean_) @ self.components_.T


def pca_reduce(X, k: int):
    """Project `X` onto its top-`k` principal components; returns ``(X_k, components)``."""
    p = PCA(k).fit(X)
    return p.transform(X), p.components_


class Standardizer:
    def fit(self, X):
        self.mean_ = X.mean(axis=0)
        sd = X.std(axis=0)
        self.scale_ = np.where(sd > 0, sd, 1.0)
        return self

    def transform(self, X):
        return (X - self.mean_) / self.scale_


# ---------------------------------------------------------------------------
# logistic regression

class LogisticRegression:
    """
    Multinomial logistic regression with an L2 penalty, trained by full-batch
    gradient descent. The step size adapts: it grows after an accepted step
    and is halved until the loss decreases (Armijo backtracking).
    """

    def __init__(self, l2=1e-4, max_iters=500, lr=1.0, tol=1e-6):
        self.l2, self.max_iters, self.lr, self.tol = l2, max_iters, lr, tol

    def _loss_grad(self, W, X1, Y):
        Z = X1 @ W
        Z -= Z.max(axis=1, keepdims=True)
        P = np.exp(Z)
        P /= P.sum(axis=1, keepdims=True)
        n = len(X1)
        reg = W[:-1]
        loss = -np.sum(Y * np.log(P + 1e-300)) / n + 0.5 * self.l2 * np.sum(reg ** 2)
        G = X1.T @ (P - Y) / n
        G[:-1] += self.l2 * reg
        return loss, G

    def fit(self, X, y):
        self.classes_ = np.unique(y)
        self.scaler_ = Standardizer().fit(X)
        Xs = self.scaler_.transform(X)
        X1 = np.hstack([Xs, np.ones((len(Xs), 1))])
        Y = (y[:, None] == self.classes_[None, :]).astype(float)
        W = np.zeros((X1.shape[1], len(self.classes_)))
        if len(self.classes_) == 1:
            self.W_ = W
            return self
        lr = self.lr
        loss, G = self._loss_grad(W, X1, Y)
        for _ in range(self.max_iters):
            gnorm2 = np.sum(G ** 2)
            if np.sqrt(gnorm2) < self.tol:
                break
            while True:
                W_new = W - lr * G
                new_loss, new_G = self._loss_grad(W_new, X1, Y)
                if new_loss <= loss - 0.5 * lr * gnorm2 or lr < 1e-12:
                    break
                lr *= 0.5
            W, loss, G = W_new, new_loss, new_G
            lr *= 1.5
        self.W_ = W
        return self

    def predict(self, X):
        Xs = self.scaler_.transform(np.asarray(X, dtype=float))
        X1 = np.hstack([Xs, np.ones((len(Xs), 1))])
        return self.classes_[np.argmax(X1 @ self.W_, axis=1)]


# ---------------------------------------------------------------------------
# CART and random forest

def _gini_best_split(X, y_onehot, feats, min_leaf):
    """
    Best threshold over the candidate features by weighted Gini impurity.

    Returns ``(impurity, feature, threshold)`` or None when no valid split exists.
    """
    n = len(X)
    Xf = X[:, feats]
    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    counts = np.cumsum(y_onehot[order], axis=0)  # (n, f, C)
    total = counts[-1]
    left_n = np.arange(1, n)[:, None]
    right_n = n - left_n
    cl = counts[:-1]
    cr = total[None] - cl
    gl = 1.0 - np.sum(cl ** 2, axis=2) / left_n ** 2
    gr = 1.0 - np.sum(cr ** 2, axis=2) / right_n ** 2
    imp = (left_n * gl + right_n * gr) / n
    valid = (xs[1:] > xs[:-1]) & (left_n >= min_leaf) & (right_n >= min_leaf)
    imp = np.where(valid, imp, np.inf)
    # first feature in sampled order, then first position, among exact minima
    flat = np.argmin(imp.T)
    fi, pos = divmod(int(flat), n - 1)
    if not np.isfinite(imp[pos, fi]):
        return None
    thr = 0.5 * (xs[pos, fi] + xs[pos + 1, fi])
    if not thr < xs[pos + 1, fi]:
        thr = xs[pos, fi]
    return imp[pos, fi], int(feats[fi]), float(thr)


class DecisionTreeClassifier:
    """CART with Gini impurity and random feature subsets at each split."""

    def __init__(self, max_depth=None, min_leaf=1, features_per_split=None, rng=None):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.features_per_split = features_per_split
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def fit(self, X, y, n_classes=None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        C = int(y.max()) + 1 if n_classes is None else n_classes
        D = X.shape[1]
        m = self.features_per_split or math.ceil(math.sqrt(D))
        m = min(m, D)
        onehot = np.eye(C)[y]
        self.feature_, self.threshold_, self.left_, self.right_, self.value_ = [], [], [], [], []

        def new_node(counts):
            self.feature_.append(-1)
            self.threshold_.append(0.0)
            self.left_.append(-1)
            self.right_.append(-1)
            self.value_.append(counts)
            return len(self.feature_) - 1

        stack = [(np.arange(len(y)), 0, new_node(onehot.sum(axis=0)))]
        while stack:
            idx, depth, node = stack.pop()
            counts = self.value_[node]
            if (np.count_nonzero(counts) <= 1 or len(idx) < 2 * self.min_leaf
                    or (self.max_depth is not None and depth >= self.max_depth)):
                continue
            perm = self.rng.permutation(D)
            best = _gini_best_split(X[idx], onehot[idx], perm[:m], self.min_leaf)
            if best is None and m < D:
                best = _gini_best_split(X[idx], onehot[idx], perm[m:], self.min_leaf)
            if best is None:
                continue
            _, f, thr = best
            go_left = X[idx, f] <= thr
            li, ri = idx[go_left], idx[~go_left]
            self.feature_[node] = f
            self.threshold_[node] = thr
            ln = new_node(onehot[li].sum(axis=0))
            rn = new_node(onehot[ri].sum(axis=0))
            self.left_[node], self.right_[node] = ln, rn
            stack.append((ri, depth + 1, rn))
            stack.append((li, depth + 1, ln))

        self.feature_ = np.array(self.feature_)
        self.threshold_ = np.array(self.threshold_)
        self.left_ = np.array(self.left_)
        self.right_ = np.array(self.right_)
        self.value_ = np.array(self.value_)
        return self

    def apply(self, X):
        X = np.asarray(X, dtype=float)
        node = np.zeros(len(X), dtype=int)
        active = self.feature_[node] >= 0
        while active.any():
            n = node[active]
            go_left = X[active, self.feature_[n]] <= self.threshold_[n]
            node[active] = np.where(go_left, self.left_[n], self.right_[n])
            active = self.feature_[node] >= 0
        return node

    def predict(self, X):
        # argmax picks the lowest label on ties
        return np.argmax(self.value_[self.apply(X)], axis=1)


def tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tree_index),)))


class RandomForestClassifier:
    def __init__(self, trees=100, max_depth=None, min_leaf=1, features_per_split=None,
                 bootstrap=True, seed=0):
        self.trees = trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.features_per_split = features_per_split
        self.bootstrap = bootstrap
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        self.classes_, yi = np.unique(np.asarray(y), return_inverse=True)
        C = len(self.classes_)
        self.estimators_ = []
        for t in range(self.trees):
            rng = tree_rng(self.seed, t)
            idx = rng.integers(0, len(X), len(X)) if self.bootstrap else np.arange(len(X))
            tree = DecisionTreeClassifier(self.max_depth, self.min_leaf, self.features_per_split, rng)
            self.estimators_.append(tree.fit(X[idx], yi[idx], n_classes=C))
        return self

    def predict(self, X):
        votes = np.zeros((len(X), len(self.classes_)), dtype=int)
        rows = np.arange(len(X))
        for tree in self.estimators_:
            np.add.at(votes, (rows, tree.predict(X)), 1)
        return self.classes_[np.argmax(votes, axis=1)]


def make_classifier(config: ClassifierConfig):
    if config.kind == "logreg":
        return LogisticRegression(config.l2, config.max_iters, config.lr, config.tol)
    return RandomForestClassifier(config.trees, config.max_depth, config.min_leaf,
                                  config.features_per_split, config.bootstrap, config.seed)


def fit_predict(train: FeatureMatrix, test_X, config: ClassifierConfig,
                classes=None) -> np.ndarray:
    """
    Train on `train` and label `test_X`.

    If `classes` is given, every listed class must occur in the training
    labels.
    """
    if len(train.y) == 0:
        raise DataError("empty training set")
    if classes is not None:
        missing = sorted(set(int(c) for c in classes) - set(np.unique(train.y).tolist()))
        if missing:
            raise DataError(f"classes {missing} have no training samples")
    model = make_classifier(config).fit(train.X, train.y)
    return model.predict(np.asarray(test_X, dtype=float))


def cross_val_predict(fm: FeatureMatrix, config: ClassifierConfig, k: int = 10, seed: int = 0,
                      pca_k: int | None = None) -> tuple[np.ndarray, list]:
    """Out-of-fold predictions; PCA (if any) is fit on each training fold only."""
    folds = kfold_indices(len(fm.y), k, seed)
    pred = np.empty_like(fm.y)
    for train, test in folds:
        Xtr, Xte = fm.X[train], fm.X[test]
        if pca_k is not None:
            p = PCA(pca_k).fit(Xtr)
            Xtr, Xte = p.transform(Xtr), p.transform(Xte)
        tr = FeatureMatrix(Xtr, fm.y[train], [f"c{i}" for i in range(Xtr.shape[1])], fm.featurization_id)
        pred[test] = fit_predict(tr, Xte, config)
    return pred, folds


def cross_validate(fm: FeatureMatrix, config: ClassifierConfig, k: int = 10, seed: int = 0,
                   pca_k: int | None = None, featurization_id: str | None = None) -> CvReport:
    pred, folds = cross_val_predict(fm, config, k, seed, pca_k)
    acc = [float(np.mean(pred[test] == fm.y[test])) for _, test in folds]
    fid = featurization_id or fm.featurization_id
    if pca_k is not None and featurization_id is None:
        fid = f"{fid}+pca{pca_k}"
    return CvReport(fid, config.kind, acc, fm.target)
