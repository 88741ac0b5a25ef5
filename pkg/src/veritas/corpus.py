"""Corpus loading, statistics and the seeded train/test split.

On-disk layout (Fake.Br ``full_texts`` style)::

    root/
      fake/*.txt
      true/*.txt

Only the ``.txt`` files directly inside each label directory are read; any
metadata side directories are ignored.
"""

from __future__ import annotations

import logging
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from veritas.errors import ConfigError, DataError
from veritas.labels import Label

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: Label

    def __post_init__(self):
        if not self.text.strip():
            raise DataError(f"document {self.id!r} has empty text")


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    source_path: str = ""
    skipped: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dup = next(i for i, c in Counter(ids).items() if c > 1)
            raise DataError(f"duplicate document id {dup!r}")

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def texts(self):
        return [d.text for d in self.documents]

    @property
    def labels(self):
        return np.array([int(d.label) for d in self.documents], dtype=np.int8)

    def label_counts(self):
        counts = Counter(d.label for d in self.documents)
        return {lab: counts.get(lab, 0) for lab in Label}


@dataclass(frozen=True)
class SplitConfig:
    test_fraction: float = 0.3
    seed: int = 42
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed}")


@dataclass(frozen=True)
class CorpusStats:
    total_docs: int
    docs_per_label: dict
    mean_tokens_per_doc: float
    token_count_per_label: dict

    def as_dict(self):
        return {
            "total_docs": self.total_docs,
            "docs_per_label": {k.dirname: v for k, v in self.docs_per_label.items()},
            "mean_tokens_per_doc": self.mean_tokens_per_doc,
            "token_count_per_label": {k.dirname: v for k, v in self.token_count_per_label.items()},
        }


def _sort_key(doc):
    return (int(doc.label), doc.id)


def load_corpus(root_path) -> Corpus:
    """Read ``root/{fake,true}/*.txt`` into a Corpus sorted by (label, id).

    Document ids are ``<label>/<file stem>`` because Fake.Br numbers the
    files of both labels from 1.  Unreadable or blank files are skipped and
    reported as ``SKIPPED <path> <reason>`` warnings.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise ConfigError(f"corpus directory {str(root)!r} does not exist")
    for label in Label:
        if not (root / label.dirname).is_dir():
            raise ConfigError(f"missing label directory '{label.dirname}'")

    docs = []
    skipped = []
    for label in Label:
        folder = root / label.dirname
        for path in sorted(folder.glob("*.txt")):
            if not path.is_file():
                continue
            reason = None
            try:
                text = path.read_text(encoding="utf-8")
            except UnicodeDecodeError:
                reason = "not valid UTF-8"
            except OSError as exc:
                reason = f"unreadable ({exc.strerror or exc})"
            else:
                if not text.strip():
                    reason = "empty"
            if reason is not None:
                skipped.append((str(path), reason))
                log.warning("SKIPPED %s %s", path, reason)
                continue
            docs.append(Document(id=f"{label.dirname}/{path.stem}", text=text, label=label))

    if not docs:
        raise DataError(f"no documents loaded from {str(root)!r}")
    docs.sort(key=_sort_key)
    return Corpus(tuple(docs), source_path=os.fspath(root), skipped=tuple(skipped))


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def _allocate_test_counts(counts, test_fraction, n_test):
    """Largest-remainder allocation of ``n_test`` across labels."""
    ideal = [c * test_fraction for c in counts]
    alloc = [int(math.floor(q)) for q in ideal]
    order = sorted(range(len(counts)), key=lambda i: (-(ideal[i] - alloc[i]), i))
    for i in order[: n_test - sum(alloc)]:
        alloc[i] += 1
    return alloc


def split_train_test(corpus: Corpus, cfg: SplitConfig) -> tuple[Corpus, Corpus]:
    """Seeded train/test partition.

    The test set has ``floor(test_fraction * N + 0.5)`` documents.  Shuffling
    uses numpy's PCG64 generator seeded with ``cfg.seed``; with stratification
    the per-label test counts come from a largest-remainder allocation and one
    permutation is drawn per label, Fake first.  Both halves keep corpus order.
    """
    n = len(corpus)
    if n == 0:
        raise DataError("cannot split an empty corpus")
    n_test = _round_half_up(cfg.test_fraction * n)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))

    if cfg.stratified:
        groups = {lab: [] for lab in Label}
        for i, doc in enumerate(corpus.documents):
            groups[doc.label].append(i)
        for lab, idx in groups.items():
            if len(idx) < 2:
                raise DataError(
                    f"stratified split needs at least 2 documents per label; "
                    f"'{lab.dirname}' has {len(idx)}"
                )
        per_label = _allocate_test_counts([len(g) for g in groups.values()], cfg.test_fraction, n_test)
        test_idx = []
        for idx, k in zip(groups.values(), per_label):
            perm = rng.permutation(len(idx))
            test_idx.extend(idx[j] for j in perm[:k])
    else:
        test_idx = rng.permutation(n)[:n_test].tolist()

    in_test = np.zeros(n, dtype=bool)
    in_test[test_idx] = True
    docs = corpus.documents
    train = Corpus(tuple(d for d, t in zip(docs, in_test) if not t), corpus.source_path)
    test = Corpus(tuple(d for d, t in zip(docs, in_test) if t), corpus.source_path)
    return train, test


def corpus_stats(corpus: Corpus, stopwords=None) -> CorpusStats:
    """Document and token counts; tokens come from :func:`veritas.normalize.tokenize`.

    With ``stopwords`` given, tokens are diacritic-stripped and stop-words
    are dropped before counting.
    """
    from veritas.normalize import remove_stopwords, strip_diacritics, tokenize

    if len(corpus) == 0:
        raise DataError("empty corpus")
    docs_per_label = corpus.label_counts()
    tokens_per_label = {lab: 0 for lab in Label}
    for doc in corpus:
        toks = tokenize(doc.text)
        if stopwords is not None:
            toks = remove_stopwords([strip_diacritics(t) for t in toks], stopwords)
        tokens_per_label[doc.label] += len(toks)
    total_tokens = sum(tokens_per_label.values())
    return CorpusStats(
        total_docs=len(corpus),
        docs_per_label=docs_per_label,
        mean_tokens_per_doc=total_tokens / len(corpus),
        token_count_per_label=tokens_per_label,
    )
