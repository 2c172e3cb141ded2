"""Random forest of CART trees (Gini splits, bootstrap samples, feature subsampling)."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..core import atomic_output
from .features import N_FEATURES

FORMAT_NAME = "bitextmine-forest"
FORMAT_VERSION = 1
LEAF = -1


@dataclass(frozen=True)
class Tree:
    feature: np.ndarray    # int, LEAF for leaves
    threshold: np.ndarray  # go left when x[feature] <= threshold
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray      # positive fraction at the node

    def __len__(self):
        return len(self.feature)

    def apply(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            feat = self.feature[node]
            active = feat != LEAF
            if not active.any():
                return self.value[node]
            r, n, f = rows[active], node[active], feat[active]
            go_left = X[r, f] <= self.threshold[n]
            node[active] = np.where(go_left, self.left[n], self.right[n])


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    n_trees: int
    max_depth: int
    feature_subsample: int
    training_seed: int

    def predict(self, X) -> np.ndarray:
        """Mean leaf value over the trees for every row of X."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.apply(X)
        return total / len(self.trees)


def score_pair(model: ForestModel, fv) -> float:
    return float(model.predict(np.asarray(fv, dtype=np.float64)[None, :])[0])


def _gini(pos, n):
    p = pos / n
    return 2.0 * p * (1.0 - p)


def _best_split_on(x, y):
    """Best (weighted impurity, threshold) for one feature, or None when x is constant."""
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = len(xs)
    valid = xs[1:] > xs[:-1]
    if not valid.any():
        return None
    k = np.arange(1, n)
    pos_left = np.cumsum(ys)[:-1]
    pos_total = pos_left[-1] + ys[-1]
    imp = (k * _gini(pos_left, k) + (n - k) * _gini(pos_total - pos_left, n - k)) / n
    imp = np.where(valid, imp, np.inf)
    best = int(np.argmin(imp))
    lo, hi = xs[best], xs[best + 1]
    thr = lo + (hi - lo) / 2.0
    if not (lo <= thr < hi):
        thr = lo
    return float(imp[best]), float(thr)


def _grow(X, y, max_depth, feature_subsample, rng):
    feature, threshold, left, right, value = [], [], [], [], []

    def node(idx, depth):
        me = len(feature)
        yy = y[idx]
        pos = float(yy.sum())
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(pos / len(idx))
        if depth >= max_depth or len(idx) < 2 or pos == 0 or pos == len(idx):
            return me
        best = None
        evaluated = 0
        for f in rng.permutation(X.shape[1]):
            if evaluated >= feature_subsample:
                break
            res = _best_split_on(X[idx, f], yy)
            if res is None:
                continue
            evaluated += 1
            if best is None or res[0] < best[0]:
                best = (res[0], res[1], int(f))
        if best is None:
            return me
        _, thr, f = best
        mask = X[idx, f] <= thr
        feature[me], threshold[me] = f, thr
        left[me] = node(idx[mask], depth + 1)
        right[me] = node(idx[~mask], depth + 1)
        return me

    node(np.arange(len(y)), 0)
    return Tree(np.array(feature, dtype=np.int64), np.array(threshold, dtype=np.float64),
                np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
                np.array(value, dtype=np.float64))


def _train_tree(X, y, max_depth, feature_subsample, seed_seq):
    rng = np.random.default_rng(seed_seq)
    sample = rng.integers(0, len(y), size=len(y))
    return _grow(X[sample], y[sample], max_depth, feature_subsample, rng)


def train_forest(pos, neg, n_trees: int = 100, max_depth: int = 12, feature_subsample: int = 4,
                 seed: int = 0, workers: int = 1) -> ForestModel:
    """Fit ``n_trees`` trees on bootstrap samples of positives (label 1) and negatives (label 0).

    Each tree draws from its own child of ``SeedSequence(seed)``, so the model is
    identical for any ``workers`` value.
    """
    pos = np.asarray(pos, dtype=np.float64).reshape(-1, N_FEATURES) if len(pos) else np.empty((0, N_FEATURES))
    neg = np.asarray(neg, dtype=np.float64).reshape(-1, N_FEATURES) if len(neg) else np.empty((0, N_FEATURES))
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("both classes need at least one example")
    if n_trees < 1 or max_depth < 1 or feature_subsample < 1:
        raise ValueError("forest hyperparameters must be positive")
    if not (np.isfinite(pos).all() and np.isfinite(neg).all()):
        raise ValueError("features must be finite")
    X = np.vstack([pos, neg])
    y = np.concatenate([np.ones(len(pos)), np.zeros(len(neg))])
    seeds = np.random.SeedSequence(seed).spawn(n_trees)
    sub = min(feature_subsample, X.shape[1])
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            trees = list(pool.map(lambda s: _train_tree(X, y, max_depth, sub, s), seeds))
    else:
        trees = [_train_tree(X, y, max_depth, sub, s) for s in seeds]
    return ForestModel(tuple(trees), n_trees, max_depth, feature_subsample, seed)


# --- model file ----------------------------------------------------------------

def dumps_model(model: ForestModel) -> str:
    lines = [f"{FORMAT_NAME}\t{FORMAT_VERSION}",
             f"n_trees={model.n_trees}\tmax_depth={model.max_depth}\t"
             f"feature_subsample={model.feature_subsample}\tseed={model.training_seed}\t"
             f"n_features={N_FEATURES}"]
    for k, tree in enumerate(model.trees):
        lines.append(f"tree\t{k}\t{len(tree)}")
        for i in range(len(tree)):
            lines.append(f"{int(tree.feature[i])}\t{float(tree.threshold[i])!r}\t"
                         f"{int(tree.left[i])}\t{int(tree.right[i])}\t{float(tree.value[i])!r}")
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> ForestModel:
    lines = text.splitlines()
    name, _, version = lines[0].partition("\t")
    if name != FORMAT_NAME:
        raise ValueError("not a forest model file")
    if int(version) > FORMAT_VERSION:
        raise ValueError(f"model format version {version} is newer than supported {FORMAT_VERSION}")
    header = dict(item.split("=", 1) for item in lines[1].split("\t") if item)
    if int(header.get("n_features", N_FEATURES)) != N_FEATURES:
        raise ValueError("feature count mismatch")
    trees = []
    pos = 2
    while pos < len(lines):
        tag, _, count = lines[pos].split("\t")
        if tag != "tree":
            raise ValueError(f"line {pos + 1}: expected a tree header")
        rows = [line.split("\t") for line in lines[pos + 1:pos + 1 + int(count)]]
        pos += 1 + int(count)
        tree = Tree(np.array([int(r[0]) for r in rows], dtype=np.int64),
                    np.array([float(r[1]) for r in rows]),
                    np.array([int(r[2]) for r in rows], dtype=np.int64),
                    np.array([int(r[3]) for r in rows], dtype=np.int64),
                    np.array([float(r[4]) for r in rows]))
        for i in np.flatnonzero(tree.feature != LEAF):
            if not (0 <= tree.feature[i] < N_FEATURES):
                raise ValueError("feature index out of range")
        trees.append(tree)
    n_trees = int(header["n_trees"])
    if n_trees != len(trees):
        raise ValueError(f"header announces {n_trees} trees, file holds {len(trees)}")
    return ForestModel(tuple(trees), n_trees, int(header["max_depth"]),
                       int(header.get("feature_subsample", 0)), int(header["seed"]))


def save_model(model: ForestModel, path) -> None:
    with atomic_output(path) as fh:
        fh.write(dumps_model(model))


def load_model(path) -> ForestModel:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())
