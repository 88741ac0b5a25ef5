import numpy as np
import pytest

from veritas import DataError
from veritas.sparse import FeatureMatrix, SparseVector


def test_sparse_vector_invariants():
    with pytest.raises(ValueError):
        SparseVector([1, 0], [1.0, 2.0], 3)
    with pytest.raises(ValueError):
        SparseVector([0, 3], [1.0, 2.0], 3)
    with pytest.raises(ValueError):
        SparseVector([0], [0.0], 3)


def test_sparse_vector_conversions():
    v = SparseVector.from_dict({2: 0.5, 0: 1.5}, 4)
    assert list(v.indices) == [0, 2]
    assert v.to_dense().tolist() == [1.5, 0.0, 0.5, 0.0]
    assert SparseVector.from_dense(v.to_dense()) == v
    assert v.to_dict() == {0: 1.5, 2: 0.5}


def test_feature_matrix_roundtrip():
    X = np.array([[0.0, 1.0], [2.0, 0.0], [0.0, 0.0]])
    m = FeatureMatrix.from_dense(X, [1, -1, 1])
    assert m.n_rows == 3 and m.dimension == 2
    assert np.array_equal(m.to_dense(), X)
    assert m.row(2).nnz == 0
    assert FeatureMatrix.from_vectors(m.rows, m.labels, 2) == m
    assert np.array_equal(m.scaled(3.0).to_dense(), 3 * X)


def test_feature_matrix_check_finite():
    m = FeatureMatrix.from_dense(np.array([[np.inf, 1.0]]), [1])
    with pytest.raises(DataError):
        m.check_finite()


def test_feature_matrix_label_length():
    with pytest.raises((ValueError, DataError)):
        FeatureMatrix.from_dense(np.eye(2), [1])
