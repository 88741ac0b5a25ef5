import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from instances import token_corpus
from veritas import ConfigError, DataError
from veritas.sparse import SparseVector
from veritas.vectorize import (
    IdfVariant,
    TfidfModel,
    build_vocabulary,
    compute_idf,
    dump_vocabulary,
    l2_normalize,
    load_vocabulary_dump,
    vectorize_document,
)

DOCS = [["a", "b", "a"], ["b", "c"]]
token_docs = st.lists(st.lists(st.sampled_from(list("abcdefghij")), max_size=12), min_size=1, max_size=15).filter(
    lambda d: any(d)
)


def test_vocabulary_counts():
    v = build_vocabulary(DOCS)
    assert v.size == 3
    assert (v.df("a"), v.df("b"), v.df("c")) == (1, 2, 1)
    assert v.total_documents == 2
    assert v.terms == ["a", "b", "c"]


def test_vocabulary_cap_tie_break():
    v = build_vocabulary(DOCS, max_size=2)
    assert v.terms == ["a", "b"]


def test_vocabulary_cap_by_total_count_not_df():
    docs = [["x", "x", "x"], ["y"], ["y"]]
    assert build_vocabulary(docs, max_size=1).terms == ["x"]


def test_vocabulary_errors():
    with pytest.raises(DataError):
        build_vocabulary([[], []])
    with pytest.raises(ConfigError):
        build_vocabulary(DOCS, max_size=0)


def test_idf_plain_values():
    v = build_vocabulary(DOCS)
    idf = compute_idf(v, IdfVariant.PLAIN).values
    assert idf[1] == 0.0
    assert idf[0] == pytest.approx(0.6931, abs=1e-4)


def test_idf_smoothed_value():
    v = build_vocabulary(DOCS)
    idf = compute_idf(v).values
    assert idf[0] == pytest.approx(math.log(1.5) + 1, abs=1e-12)
    assert idf[0] == pytest.approx(1.4055, abs=1e-4)


def test_vectorize_plain_example():
    v = build_vocabulary(DOCS)
    vec = vectorize_document(["a", "a", "b"], v, compute_idf(v, "plain"))
    assert list(vec.indices) == [0]
    assert vec.values[0] == pytest.approx(2 / 3 * math.log(2), abs=1e-12)
    assert vec.values[0] == pytest.approx(0.4621, abs=1e-4)


def test_vectorize_oov_and_zero_idf():
    v = build_vocabulary(DOCS)
    assert vectorize_document(["zz", "yy"], v, compute_idf(v)).nnz == 0
    assert vectorize_document(["b"], v, compute_idf(v, "plain")).nnz == 0


def test_tf_denominator_ignores_oov():
    v = build_vocabulary(DOCS)
    idf = compute_idf(v)
    a = vectorize_document(["a", "c"], v, idf)
    b = vectorize_document(["a", "c", "zz", "zz"], v, idf)
    assert a == b


def test_l2_examples():
    out = l2_normalize(SparseVector([0, 1], [3.0, 4.0], 2))
    assert np.allclose(out.values, [0.6, 0.8], atol=1e-15)
    empty = SparseVector([], [], 5)
    assert l2_normalize(empty) == empty


vec_values = st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=20)


@given(vec_values)
def test_l2_unit_norm_idempotent_pattern(vals):
    v = SparseVector(list(range(0, 2 * len(vals), 2)), vals, 2 * len(vals))
    n = l2_normalize(v)
    dense = np.array(vals)
    assert abs(math.fsum(x * x for x in n.values) - 1.0) <= 1e-9
    assert np.allclose(n.values, dense / np.linalg.norm(dense), rtol=0, atol=1e-12)
    assert np.array_equal(n.indices, v.indices)
    assert np.allclose(l2_normalize(n).values, n.values, rtol=0, atol=1e-9)


@given(token_docs, st.sampled_from([None, 1, 3, 6]), st.sampled_from(["smoothed", "plain"]))
def test_tfidf_matches_dense_oracle(docs, cap, variant):
    model = TfidfModel.fit(docs, cap, variant)
    terms, expected = oracles.tfidf_dense(docs, docs, cap, variant)
    assert model.vocabulary.terms == terms
    got = np.array([v.to_dense() for v in model.transform(docs)])
    assert np.abs(got - expected).max(initial=0.0) <= 1e-9


def test_tfidf_oracle_random_corpora():
    rng = np.random.default_rng(7)
    for _ in range(10):
        docs, cap, variant = token_corpus(rng)
        train, test = docs[: len(docs) // 2 + 1], docs[len(docs) // 2 :]
        if not any(train):
            continue
        model = TfidfModel.fit(train, cap, variant)
        _, expected = oracles.tfidf_dense(train, test, cap, variant)
        got = np.array([v.to_dense() for v in model.transform(test)])
        assert np.abs(got - expected).max(initial=0.0) <= 1e-9


@given(token_docs)
def test_tf_sums_to_one(docs):
    v = build_vocabulary(docs)
    ones = type(compute_idf(v))(np.ones(v.size), IdfVariant.PLAIN)
    for d in docs:
        vec = vectorize_document(d, v, ones)
        if d:
            assert math.fsum(vec.values) == pytest.approx(1.0, abs=1e-12)


@given(token_docs)
def test_capped_vocabularies_nest(docs):
    full = set(build_vocabulary(docs).terms)
    big = set(build_vocabulary(docs, 5).terms)
    small = set(build_vocabulary(docs, 2).terms)
    assert small <= big <= full
    assert len(small) <= 2 and len(big) <= 5
    assert len(small) == min(2, len(full)) and len(big) == min(5, len(full))


@given(token_docs, st.sampled_from(["smoothed", "plain"]))
def test_idf_monotone(docs, variant):
    v = build_vocabulary(docs)
    idf = compute_idf(v, variant).values
    df = v.document_frequency
    assert np.all(idf >= 0) and np.all(np.isfinite(idf))
    for i in range(v.size):
        for j in range(v.size):
            if df[i] < df[j]:
                assert idf[i] > idf[j]


@given(token_docs, st.randoms(use_true_random=False))
def test_vocabulary_order_independent(docs, rnd):
    shuffled = list(docs)
    rnd.shuffle(shuffled)
    assert build_vocabulary(docs, 4) == build_vocabulary(shuffled, 4)


def test_transform_does_not_touch_vocabulary():
    model = TfidfModel.fit(DOCS)
    before = (dict(model.vocabulary.term_to_index), model.vocabulary.document_frequency.copy())
    model.transform([["novo", "a", "termo"], ["c"]])
    assert dict(model.vocabulary.term_to_index) == before[0]
    assert np.array_equal(model.vocabulary.document_frequency, before[1])


def test_vocabulary_dump_roundtrip(tmp_path):
    model = TfidfModel.fit(DOCS)
    path = tmp_path / "v.tsv"
    dump_vocabulary(model.vocabulary, model.idf, path)
    assert path.read_text().splitlines()[0].split("\t")[:3] == ["a", "0", "1"]
    rows = load_vocabulary_dump(path)
    assert [r[0] for r in rows] == ["a", "b", "c"]
    assert [r[3] for r in rows] == model.idf.values.tolist()


def test_feature_matrix_rows_unit_norm():
    model = TfidfModel.fit(DOCS)
    X = model.feature_matrix(DOCS + [["zz"]], [1, -1, 1])
    norms = np.linalg.norm(X.to_dense(), axis=1)
    assert np.allclose(norms[:2], 1.0, atol=1e-12) and norms[2] == 0.0
