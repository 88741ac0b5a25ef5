"""Linear SVM, k-nearest-neighbours and leaf-limited CART classifiers.

All three work on :class:`~veritas.sparse.FeatureMatrix` rows with labels
in {-1, +1}.  Exact ties always resolve to +1 (True).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from veritas import kernels
from veritas.errors import ConfigError, DataError
from veritas.sparse import FeatureMatrix, SparseVector

FORMAT_VERSION = "v1"


def _check_two_classes(data: FeatureMatrix):
    if data.n_rows == 0:
        raise DataError("empty training set")
    labels = set(np.unique(data.labels).tolist())
    if not labels <= {-1, 1}:
        raise DataError(f"labels must be -1/+1, got {sorted(labels)}")
    if labels != {-1, 1}:
        raise DataError("training data holds a single class")


def _check_dim(model, x: SparseVector):
    if x.dimension != model.dimension:
        raise DataError(f"vector dimension {x.dimension} != model dimension {model.dimension}")


def _as_matrix(X, dimension):
    if isinstance(X, FeatureMatrix):
        if X.dimension != dimension:
            raise DataError(f"matrix dimension {X.dimension} != model dimension {dimension}")
        return X
    X = list(X)
    for x in X:
        if x.dimension != dimension:
            raise DataError(f"vector dimension {x.dimension} != model dimension {dimension}")
    return FeatureMatrix.from_vectors(X, np.zeros(len(X), dtype=np.int8), dimension)


def _to_csc(data: FeatureMatrix):
    csr = sp.csr_matrix((data.data, data.indices, data.indptr), shape=(data.n_rows, data.dimension))
    csc = csr.tocsc()
    csc.sort_indices()
    return (
        csc.indptr.astype(np.int64),
        csc.indices.astype(np.int64),
        csc.data.astype(np.float64),
    )


def _row_sqnorms(data: FeatureMatrix):
    rows = np.repeat(np.arange(data.n_rows), np.diff(data.indptr))
    return np.bincount(rows, weights=data.data**2, minlength=data.n_rows).astype(np.float64)


# -- linear SVM ---------------------------------------------------------------


@dataclass(frozen=True)
class SvmParams:
    C: float = 1.0
    tolerance: float = 1e-4
    max_passes: int = 1000
    seed: int = 0
    bias: float = 1.0

    def __post_init__(self):
        if not self.C > 0:
            raise ConfigError("C must be positive")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.max_passes < 1:
            raise ConfigError("max_passes must be >= 1")


@dataclass(eq=False)
class SvmModel:
    weights: np.ndarray
    bias: float
    params: SvmParams = field(default_factory=SvmParams)
    passes: int = 0
    converged: bool = False
    objective_history: list = field(default_factory=list)
    kind = "svm"

    @property
    def dimension(self):
        return int(self.weights.size)

    def decision_value(self, x: SparseVector) -> float:
        _check_dim(self, x)
        return float(np.dot(self.weights[x.indices], x.values)) + self.bias

    def predict(self, x):
        return 1 if self.decision_value(x) >= 0.0 else -1

    def predict_batch(self, X):
        X = _as_matrix(X, self.dimension)
        return np.array([self.predict(X.row(i)) for i in range(X.n_rows)], dtype=np.int8)


def dual_objective(alpha, w):
    return float(alpha.sum() - 0.5 * np.dot(w, w))


def train_linear_svm(data: FeatureMatrix, params: SvmParams | None = None, backend=None) -> SvmModel:
    """Dual coordinate descent for the L2-regularized hinge loss.

    Solves ``min 0.5*|w|^2 + C * sum(max(0, 1 - y_i (w.x_i + b)))`` where the
    bias is learned as the weight of a constant feature ``params.bias``.
    Coordinates are visited in a fresh PCG64 permutation each pass; training
    stops once the largest projected-gradient magnitude in a pass drops
    below ``params.tolerance``.
    """
    params = params or SvmParams()
    _check_two_classes(data)
    data.check_finite()
    impl = kernels if backend is None else kernels.get_backend(backend)

    n = data.n_rows
    y = data.labels.astype(np.float64)
    qdiag = _row_sqnorms(data) + params.bias**2
    alpha = np.zeros(n)
    w = np.zeros(data.dimension + 1)
    rng = np.random.Generator(np.random.PCG64(params.seed))

    history = [0.0]
    converged = False
    passes = 0
    for passes in range(1, params.max_passes + 1):
        order = rng.permutation(n).astype(np.int64)
        max_pg = impl.svm_dual_cd_pass(
            data.indptr, data.indices, data.data, y, qdiag, alpha, w, order, float(params.C), float(params.bias)
        )
        history.append(dual_objective(alpha, w))
        if max_pg < params.tolerance:
            converged = True
            break
    if not np.all(np.isfinite(w)):
        raise DataError("SVM training diverged to non-finite weights")
    return SvmModel(
        weights=w[:-1].copy(),
        bias=float(w[-1] * params.bias),
        params=params,
        passes=passes,
        converged=converged,
        objective_history=history,
    )


def predict_svm(model: SvmModel, x: SparseVector) -> int:
    return model.predict(x)


# -- k-nearest neighbours -----------------------------------------------------


_UNIT = 2.0**-53
_TINY = 5e-324
_FIXED_SHIFT = 1074  # every finite double is an integer multiple of 2**-1074
_KNN_BLOCK = 256


def _fixed(v):
    """Exact integer value of ``v * 2**1074``."""
    num, den = float(v).as_integer_ratio()
    return num << (_FIXED_SHIFT + 1 - den.bit_length())


@dataclass(eq=False)
class KnnModel:
    """Stored training rows; neighbours by squared Euclidean distance.

    Distances come from the kernel in floating point.  Every row whose
    distance could, within a rounding-error bound, belong to the exact k
    nearest is kept as a candidate; when there are more than k candidates
    the near ties are settled in exact integer arithmetic.  Predictions
    therefore equal an exact brute-force scan with ties going to the lower
    training index.
    """

    data: FeatureMatrix
    k: int = 3
    kind = "knn"

    def __post_init__(self):
        self._csc = _to_csc(self.data)
        self._sqnorm = _row_sqnorms(self.data)
        self._labels = self.data.labels.astype(np.int64)
        self._exact_sq = {}
        nnz = np.diff(self.data.indptr)
        self._max_nnz = int(nnz.max(initial=0))

    @property
    def dimension(self):
        return self.data.dimension

    def predict_batch(self, X, backend=None):
        X = _as_matrix(X, self.dimension)
        X.check_finite()
        impl = kernels if backend is None else kernels.get_backend(backend)
        colptr, rowidx, coldata = self._csc
        out = np.empty(X.n_rows, dtype=np.int8)
        q_nnz = np.diff(X.indptr)
        # rounding-error bound of a computed distance, relative to |x|^2 + |q|^2
        terms = max(self._max_nnz, int(q_nnz.max(initial=0))) + 2
        rel = 3.0 * terms * _UNIT
        absolute = 8.0 * terms * _TINY
        for start in range(0, X.n_rows, _KNN_BLOCK):
            stop = min(start + _KNN_BLOCK, X.n_rows)
            lo, hi = X.indptr[start], X.indptr[stop]
            D, qn = impl.knn_sq_distances(
                colptr, rowidx, coldata, self._sqnorm,
                X.indptr[start : stop + 1] - lo, X.indices[lo:hi], X.data[lo:hi],
            )
            for b in range(stop - start):
                tol = rel * (self._sqnorm + qn[b]) + absolute
                nearest = self._nearest(D[b], tol, X.row(start + b))
                out[start + b] = 1 if self._labels[nearest].sum() >= 0 else -1
        return out

    def _nearest(self, d, tol, query):
        k = self.k
        top = np.argpartition(d, k - 1)[:k]
        upper = float(np.max(d[top] + tol[top]))
        candidates = np.flatnonzero(d - tol <= upper)
        if candidates.size == k:
            return candidates
        q_sq = sum(_fixed(v) ** 2 for v in query.values.tolist())
        ranked = sorted((self._exact_distance(int(i), query, q_sq), int(i)) for i in candidates)
        return np.array([i for _, i in ranked[:k]], dtype=np.int64)

    def _exact_distance(self, i, query, q_sq):
        """``|x_i - q|^2 * 2**2148`` as an exact integer."""
        lo, hi = self.data.indptr[i], self.data.indptr[i + 1]
        idx, vals = self.data.indices[lo:hi], self.data.data[lo:hi]
        x_sq = self._exact_sq.get(i)
        if x_sq is None:
            x_sq = sum(_fixed(v) ** 2 for v in vals.tolist())
            self._exact_sq[i] = x_sq
        _, a, b = np.intersect1d(idx, query.indices, assume_unique=True, return_indices=True)
        dot = sum(_fixed(x) * _fixed(y) for x, y in zip(vals[a].tolist(), query.values[b].tolist()))
        return x_sq + q_sq - 2 * dot

    def predict(self, x):
        _check_dim(self, x)
        return int(self.predict_batch([x])[0])


def train_knn(data: FeatureMatrix, k: int = 3) -> KnnModel:
    if k < 1:
        raise ConfigError("k must be >= 1")
    if data.n_rows < k:
        raise DataError(f"k-NN needs at least k={k} training rows, got {data.n_rows}")
    data.check_finite()
    return KnnModel(data, int(k))


def predict_knn(model: KnnModel, x: SparseVector) -> int:
    return model.predict(x)


# -- decision tree ------------------------------------------------------------


@dataclass(eq=False)
class TreeModel:
    """Array-encoded binary tree; ``feature == -1`` marks a leaf.

    A row goes left when ``x[feature] <= threshold``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, 2): negatives, positives
    gain: np.ndarray
    dimension: int
    max_leaves: int | None = 3
    max_depth: int | None = None
    kind = "dt"

    @property
    def n_nodes(self):
        return int(self.feature.size)

    @property
    def n_leaves(self):
        return int(np.count_nonzero(self.feature < 0))

    def leaf_prediction(self, node):
        neg, pos = self.counts[node]
        return 1 if pos >= neg else -1

    def apply(self, x: SparseVector) -> int:
        _check_dim(self, x)
        node = 0
        while self.feature[node] >= 0:
            f = self.feature[node]
            j = np.searchsorted(x.indices, f)
            v = x.values[j] if j < x.indices.size and x.indices[j] == f else 0.0
            node = self.left[node] if v <= self.threshold[node] else self.right[node]
        return int(node)

    def predict(self, x):
        return self.leaf_prediction(self.apply(x))

    def predict_batch(self, X):
        X = _as_matrix(X, self.dimension)
        return np.array([self.predict(X.row(i)) for i in range(X.n_rows)], dtype=np.int8)

    def structure(self):
        """Nested tuples, handy for comparing trees."""

        def rec(node):
            if self.feature[node] < 0:
                return ("leaf", int(self.counts[node][0]), int(self.counts[node][1]))
            return (
                int(self.feature[node]),
                float(self.threshold[node]),
                rec(int(self.left[node])),
                rec(int(self.right[node])),
            )

        return rec(0)


def train_decision_tree(data: FeatureMatrix, max_leaves=3, max_depth=None, backend=None) -> TreeModel:
    """Best-first CART growth on Gini impurity.

    Each leaf's best split is the one with the largest size-weighted Gini
    decrease over midpoints of consecutive distinct values; the leaf whose
    split gains most is expanded next (earlier-created leaf on ties) until
    ``max_leaves`` is reached or no split helps.  ``max_depth`` replaces
    the leaf cap with a depth cap.
    """
    if max_depth is not None and max_leaves is not None:
        raise ConfigError("max_leaves and max_depth are mutually exclusive")
    if max_depth is None and max_leaves is None:
        raise ConfigError("one of max_leaves or max_depth is required")
    if max_leaves is not None and max_leaves < 1:
        raise ConfigError("max_leaves must be >= 1")
    if max_depth is not None and max_depth < 0:
        raise ConfigError("max_depth must be >= 0")
    _check_two_classes(data)
    data.check_finite()
    impl = kernels if backend is None else kernels.get_backend(backend)

    colptr, rowidx, coldata = _to_csc(data)
    labels = data.labels
    n = data.n_rows
    exact = n <= 10_000  # int64 cross products stay below 2**63 up to here

    feature, threshold, left, right, counts, gain, depth = [], [], [], [], [], [], []
    members = []
    pending = {}

    def add_node(mask, d):
        node = len(feature)
        npos = int(np.count_nonzero(labels[mask] > 0))
        nneg = int(np.count_nonzero(mask)) - npos
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append((nneg, npos))
        gain.append(0.0)
        depth.append(d)
        members.append(mask)
        if npos and nneg and (max_depth is None or d < max_depth):
            f, thr, g, lp, ln = impl.tree_best_split(colptr, rowidx, coldata, labels, mask, npos, nneg, exact)
            if f >= 0:
                pending[node] = (int(f), float(thr), float(g))
        return node

    add_node(np.ones(n, dtype=bool), 0)
    n_leaves = 1
    while pending and (max_leaves is None or n_leaves < max_leaves):
        node = min(pending, key=lambda k: (-pending[k][2], k))
        f, thr, g = pending.pop(node)
        mask = members[node]
        col = np.zeros(n)
        a, b = colptr[f], colptr[f + 1]
        col[rowidx[a:b]] = coldata[a:b]
        go_left = col <= thr
        feature[node], threshold[node], gain[node] = f, thr, g
        left[node] = add_node(mask & go_left, depth[node] + 1)
        right[node] = add_node(mask & ~go_left, depth[node] + 1)
        n_leaves += 1

    return TreeModel(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        counts=np.array(counts, dtype=np.int64).reshape(-1, 2),
        gain=np.array(gain, dtype=np.float64),
        dimension=data.dimension,
        max_leaves=max_leaves,
        max_depth=max_depth,
    )


def predict_tree(model: TreeModel, x: SparseVector) -> int:
    return model.predict(x)


# -- uniform interface --------------------------------------------------------

Model = SvmModel | KnnModel | TreeModel

CLASSIFIERS = ("svm", "knn", "dt")


def predict(model, x: SparseVector) -> int:
    if isinstance(model, SvmModel):
        return predict_svm(model, x)
    if isinstance(model, KnnModel):
        return predict_knn(model, x)
    if isinstance(model, TreeModel):
        return predict_tree(model, x)
    raise TypeError(f"not a model: {type(model).__name__}")


def predict_batch(model, X) -> np.ndarray:
    return model.predict_batch(X)


def train(kind, data: FeatureMatrix, svm=None, knn_k=3, max_leaves=3, max_depth=None):
    kind = kind.lower()
    if kind == "svm":
        return train_linear_svm(data, svm)
    if kind == "knn":
        return train_knn(data, knn_k)
    if kind in ("dt", "tree"):
        return train_decision_tree(data, max_leaves=max_leaves, max_depth=max_depth)
    raise ConfigError(f"unknown classifier {kind!r}")


# -- persistence --------------------------------------------------------------


def _payload(model):
    if isinstance(model, SvmModel):
        return {
            "weights": model.weights.tolist(),
            "bias": model.bias,
            "params": asdict(model.params),
            "passes": model.passes,
            "converged": model.converged,
        }
    if isinstance(model, KnnModel):
        d = model.data
        return {
            "k": model.k,
            "indptr": d.indptr.tolist(),
            "indices": d.indices.tolist(),
            "data": d.data.tolist(),
            "labels": d.labels.tolist(),
        }
    if isinstance(model, TreeModel):
        return {
            "feature": model.feature.tolist(),
            "threshold": model.threshold.tolist(),
            "left": model.left.tolist(),
            "right": model.right.tolist(),
            "counts": model.counts.tolist(),
            "gain": model.gain.tolist(),
            "max_leaves": model.max_leaves,
            "max_depth": model.max_depth,
        }
    raise TypeError(f"not a model: {type(model).__name__}")


def dumps_model(model) -> str:
    """Header ``veritas-model v1 <kind> <V>`` followed by one JSON payload line."""
    header = f"veritas-model {FORMAT_VERSION} {model.kind} {model.dimension}"
    return header + "\n" + json.dumps(_payload(model)) + "\n"


def loads_model(text: str):
    head, _, body = text.partition("\n")
    parts = head.split()
    if len(parts) != 4 or parts[0] != "veritas-model":
        raise DataError("not a veritas model file")
    if parts[1] != FORMAT_VERSION:
        raise DataError(f"unsupported model format {parts[1]!r}")
    kind, dim = parts[2], int(parts[3])
    try:
        p = json.loads(body)
    except json.JSONDecodeError as exc:
        raise DataError(f"corrupt model payload: {exc}") from None
    if kind == "svm":
        if len(p["weights"]) != dim:
            raise DataError(f"model header says V={dim} but payload has {len(p['weights'])} weights")
        return SvmModel(
            weights=np.array(p["weights"], dtype=np.float64),
            bias=float(p["bias"]),
            params=SvmParams(**p["params"]),
            passes=p["passes"],
            converged=p["converged"],
        )
    if kind == "knn":
        fm = FeatureMatrix(np.array(p["indptr"]), np.array(p["indices"]), np.array(p["data"]), np.array(p["labels"]), dim)
        return KnnModel(fm, p["k"])
    if kind == "dt":
        return TreeModel(
            feature=np.array(p["feature"], dtype=np.int64),
            threshold=np.array(p["threshold"], dtype=np.float64),
            left=np.array(p["left"], dtype=np.int64),
            right=np.array(p["right"], dtype=np.int64),
            counts=np.array(p["counts"], dtype=np.int64).reshape(-1, 2),
            gain=np.array(p["gain"], dtype=np.float64),
            dimension=dim,
            max_leaves=p["max_leaves"],
            max_depth=p["max_depth"],
        )
    raise DataError(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path):
    return loads_model(Path(path).read_text(encoding="utf-8"))
