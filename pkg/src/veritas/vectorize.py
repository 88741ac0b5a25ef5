"""Vocabulary construction and TF-IDF weighting.

TF is the in-vocabulary relative frequency of a term inside a document;
IDF comes in two flavours::

    plain     idf(t) = ln(n_docs / df(t))
    smoothed  idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType

import numpy as np

from veritas.errors import ConfigError, DataError
from veritas.sparse import FeatureMatrix, SparseVector


class IdfVariant(str, enum.Enum):
    PLAIN = "plain"
    SMOOTHED = "smoothed"

    @classmethod
    def parse(cls, value):
        try:
            return cls(str(getattr(value, "value", value)).lower())
        except ValueError:
            raise ConfigError(f"unknown idf variant {value!r}") from None


@dataclass(frozen=True, eq=False)
class Vocabulary:
    term_to_index: MappingProxyType
    document_frequency: np.ndarray
    total_documents: int
    max_size: int | None = None
    term_counts: np.ndarray | None = None

    @property
    def size(self):
        return len(self.term_to_index)

    def __len__(self):
        return self.size

    def __contains__(self, term):
        return term in self.term_to_index

    @property
    def terms(self):
        out = [""] * self.size
        for t, i in self.term_to_index.items():
            out[i] = t
        return out

    def df(self, term):
        return int(self.document_frequency[self.term_to_index[term]])

    def __eq__(self, other):
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (
            dict(self.term_to_index) == dict(other.term_to_index)
            and np.array_equal(self.document_frequency, other.document_frequency)
            and self.total_documents == other.total_documents
            and self.max_size == other.max_size
        )


def build_vocabulary(token_docs, max_size=None) -> Vocabulary:
    """Collect terms from training documents.

    With ``max_size`` the ``max_size`` terms of highest total count are kept
    (ties: lexicographically smaller term first).  Columns are assigned in
    lexicographic term order.
    """
    if max_size is not None and (int(max_size) != max_size or max_size < 1):
        raise ConfigError(f"max_size must be a positive integer, got {max_size!r}")
    counts = Counter()
    df = Counter()
    n_docs = 0
    for tokens in token_docs:
        n_docs += 1
        counts.update(tokens)
        df.update(set(tokens))
    if not counts:
        raise DataError("cannot build a vocabulary: every training document is empty")

    terms = list(counts)
    if max_size is not None and len(terms) > max_size:
        terms.sort(key=lambda t: (-counts[t], t))
        terms = terms[: int(max_size)]
    terms.sort()
    return Vocabulary(
        term_to_index=MappingProxyType({t: i for i, t in enumerate(terms)}),
        document_frequency=np.array([df[t] for t in terms], dtype=np.int64),
        total_documents=n_docs,
        max_size=None if max_size is None else int(max_size),
        term_counts=np.array([counts[t] for t in terms], dtype=np.int64),
    )


@dataclass(frozen=True, eq=False)
class IdfTable:
    values: np.ndarray
    variant: IdfVariant

    def __len__(self):
        return int(self.values.size)


def compute_idf(vocab: Vocabulary, variant=IdfVariant.SMOOTHED) -> IdfTable:
    variant = IdfVariant.parse(variant)
    n = float(vocab.total_documents)
    df = vocab.document_frequency.astype(np.float64)
    if variant is IdfVariant.PLAIN:
        values = np.log(n / df)
    else:
        values = np.log((1.0 + n) / (1.0 + df)) + 1.0
    # ln(1) can come out as a tiny negative on some platforms
    values = np.maximum(values, 0.0)
    values.setflags(write=False)
    return IdfTable(values, variant)


def vectorize_document(tokens, vocab: Vocabulary, idf: IdfTable) -> SparseVector:
    if len(idf) != vocab.size:
        raise ConfigError(f"idf table length {len(idf)} != vocabulary size {vocab.size}")
    index = vocab.term_to_index
    counts = Counter(index[t] for t in tokens if t in index)
    total = sum(counts.values())
    if total == 0:
        return SparseVector([], [], vocab.size)
    cols = sorted(counts)
    weights = [(counts[c] / total) * idf.values[c] for c in cols]
    keep = [k for k, w in enumerate(weights) if w != 0.0]
    return SparseVector([cols[k] for k in keep], [weights[k] for k in keep], vocab.size)


def l2_normalize(vec: SparseVector) -> SparseVector:
    if vec.nnz == 0:
        return vec
    norm = math.sqrt(float(np.dot(vec.values, vec.values)))
    if norm == 0.0:
        return vec
    values = vec.values / norm
    keep = values != 0.0
    return SparseVector(vec.indices[keep], values[keep], vec.dimension)


@dataclass(frozen=True, eq=False)
class TfidfModel:
    """A fitted vocabulary and its IDF table."""

    vocabulary: Vocabulary
    idf: IdfTable

    @classmethod
    def fit(cls, token_docs, max_size=None, variant=IdfVariant.SMOOTHED):
        vocab = build_vocabulary(token_docs, max_size)
        return cls(vocab, compute_idf(vocab, variant))

    @property
    def dimension(self):
        return self.vocabulary.size

    def transform_one(self, tokens, normalize=True):
        vec = vectorize_document(tokens, self.vocabulary, self.idf)
        return l2_normalize(vec) if normalize else vec

    def transform(self, token_docs, normalize=True):
        return [self.transform_one(t, normalize) for t in token_docs]

    def feature_matrix(self, token_docs, labels, normalize=True):
        return FeatureMatrix.from_vectors(self.transform(token_docs, normalize), labels, self.dimension)


def dump_vocabulary(vocab: Vocabulary, idf: IdfTable, path) -> None:
    """Write ``term<TAB>index<TAB>document_frequency<TAB>idf`` sorted by index."""
    lines = [
        f"{term}\t{i}\t{int(vocab.document_frequency[i])}\t{float(idf.values[i])!r}\n"
        for i, term in enumerate(vocab.terms)
    ]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_vocabulary_dump(path):
    """Inverse of :func:`dump_vocabulary`: list of (term, index, df, idf)."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        parts = line.split("\t")
        if len(parts) != 4:
            raise DataError(f"{path}:{lineno}: expected 4 tab-separated columns")
        rows.append((parts[0], int(parts[1]), int(parts[2]), float(parts[3])))
    return rows
