"""Sparse vector and CSR feature-matrix containers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from veritas.errors import DataError


class SparseVector:
    """Sorted (index, weight) pairs over a fixed dimension; zeros are never stored."""

    __slots__ = ("indices", "values", "dimension")

    def __init__(self, indices, values, dimension):
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if indices.ndim != 1 or indices.shape != values.shape:
            raise ValueError("indices and values must be 1-D arrays of equal length")
        if indices.size:
            if np.any(np.diff(indices) <= 0):
                raise ValueError("indices must be strictly increasing")
            if indices[0] < 0 or indices[-1] >= dimension:
                raise ValueError(f"index out of range for dimension {dimension}")
            if np.any(values == 0.0):
                raise ValueError("zero-valued entries must not be stored")
        self.indices = indices
        self.values = values
        self.dimension = int(dimension)

    @classmethod
    def from_dict(cls, entries, dimension):
        items = sorted((int(k), float(v)) for k, v in entries.items() if v != 0.0)
        return cls([k for k, _ in items], [v for _, v in items], dimension)

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense, dtype=np.float64)
        idx = np.flatnonzero(dense)
        return cls(idx, dense[idx], dense.shape[0])

    def to_dense(self):
        out = np.zeros(self.dimension)
        out[self.indices] = self.values
        return out

    def to_dict(self):
        return dict(zip(self.indices.tolist(), self.values.tolist()))

    @property
    def nnz(self):
        return int(self.indices.size)

    def __len__(self):
        return self.nnz

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        pairs = ", ".join(f"{i}: {v:.6g}" for i, v in zip(self.indices.tolist(), self.values.tolist()))
        return f"SparseVector({{{pairs}}}, dimension={self.dimension})"


@dataclass(eq=False)
class FeatureMatrix:
    """CSR rows plus +1/-1 labels (Fake -> -1, True -> +1)."""

    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    labels: np.ndarray
    dimension: int

    def __post_init__(self):
        self.indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        self.data = np.ascontiguousarray(self.data, dtype=np.float64)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int8)
        if self.indptr.size != self.labels.size + 1:
            raise DataError("rows and labels differ in length")
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= self.dimension):
            raise DataError(f"feature index out of range for dimension {self.dimension}")

    @classmethod
    def from_vectors(cls, vectors, labels, dimension=None):
        vectors = list(vectors)
        if dimension is None:
            if not vectors:
                raise DataError("cannot infer dimension of an empty matrix")
            dimension = vectors[0].dimension
        for v in vectors:
            if v.dimension != dimension:
                raise DataError(f"row dimension {v.dimension} != {dimension}")
        indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([v.nnz for v in vectors])
        indices = np.concatenate([v.indices for v in vectors]) if vectors else np.zeros(0, np.int64)
        data = np.concatenate([v.values for v in vectors]) if vectors else np.zeros(0)
        return cls(indptr, indices, data, np.asarray(labels, dtype=np.int8), int(dimension))

    @classmethod
    def from_dense(cls, X, labels):
        X = np.asarray(X, dtype=np.float64)
        return cls.from_vectors([SparseVector.from_dense(r) for r in X], labels, X.shape[1])

    @property
    def n_rows(self):
        return int(self.labels.size)

    def __len__(self):
        return self.n_rows

    def row(self, i):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return SparseVector(self.indices[lo:hi], self.data[lo:hi], self.dimension)

    @property
    def rows(self):
        return [self.row(i) for i in range(self.n_rows)]

    def to_dense(self):
        out = np.zeros((self.n_rows, self.dimension))
        for i in range(self.n_rows):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            out[i, self.indices[lo:hi]] = self.data[lo:hi]
        return out

    def scaled(self, factor):
        return FeatureMatrix(self.indptr, self.indices, self.data * factor, self.labels, self.dimension)

    def check_finite(self):
        if not np.all(np.isfinite(self.data)):
            raise DataError("feature matrix holds non-finite values")

    def __eq__(self, other):
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.data, other.data)
            and np.array_equal(self.labels, other.labels)
        )
