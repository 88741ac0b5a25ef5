"""Accuracy, confusion matrices and per-class precision/recall."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from veritas.errors import DataError
from veritas.labels import Label
from veritas.sparse import FeatureMatrix

ORDER = (Label.FAKE, Label.TRUE)


def _index(label):
    return 0 if int(Label.parse(label)) < 0 else 1


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 counts indexed ``[true][predicted]`` in (Fake, True) order."""

    counts: tuple[tuple[int, int], tuple[int, int]]

    @property
    def total(self):
        return sum(sum(r) for r in self.counts)

    @property
    def trace(self):
        return self.counts[0][0] + self.counts[1][1]

    def as_array(self):
        return np.array(self.counts, dtype=np.int64)

    def render(self):
        (ff, ft), (tf, tt) = self.counts
        w = max(len(str(c)) for c in (ff, ft, tf, tt, "pred Fake"))
        head = f"{'':>10}  {'pred Fake':>{w}}  {'pred True':>{w}}"
        return "\n".join(
            [
                head,
                f"{'true Fake':>10}  {ff:>{w}}  {ft:>{w}}",
                f"{'true True':>10}  {tf:>{w}}  {tt:>{w}}",
            ]
        )


def confusion_matrix(predictions, truth) -> ConfusionMatrix:
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise DataError(f"{len(predictions)} predictions for {len(truth)} labels")
    if not truth:
        raise DataError("confusion matrix of zero documents")
    cells = [[0, 0], [0, 0]]
    for p, t in zip(predictions, truth):
        cells[_index(t)][_index(p)] += 1
    return ConfusionMatrix((tuple(cells[0]), tuple(cells[1])))


def format_percent(value) -> str:
    """Two decimals, half-up (96.205 -> '96.21')."""
    return str(Decimal(repr(float(value))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    confusion: ConfusionMatrix
    n_test: int
    # extensions beyond plain accuracy; None when a class was never predicted / present
    precision: dict
    recall: dict

    @classmethod
    def from_confusion(cls, cm: ConfusionMatrix):
        total = cm.total
        cells = cm.counts
        precision, recall = {}, {}
        for i, lab in enumerate(ORDER):
            predicted = cells[0][i] + cells[1][i]
            actual = sum(cells[i])
            precision[lab.dirname] = 100.0 * cells[i][i] / predicted if predicted else None
            recall[lab.dirname] = 100.0 * cells[i][i] / actual if actual else None
        return cls(100.0 * cm.trace / total, cm, total, precision, recall)

    def to_dict(self):
        return {
            "accuracy": self.accuracy,
            "confusion": [list(r) for r in self.confusion.counts],
            "n_test": self.n_test,
            "precision": dict(self.precision),
            "recall": dict(self.recall),
        }

    @classmethod
    def from_dict(cls, d):
        counts = tuple(tuple(int(c) for c in row) for row in d["confusion"])
        return cls(float(d["accuracy"]), ConfusionMatrix(counts), int(d["n_test"]), dict(d["precision"]), dict(d["recall"]))


def evaluate(model, test: FeatureMatrix) -> EvalReport:
    if test.n_rows == 0:
        raise DataError("empty test set")
    if test.dimension != model.dimension:
        raise DataError(f"test dimension {test.dimension} != model dimension {model.dimension}")
    preds = model.predict_batch(test)
    return EvalReport.from_confusion(confusion_matrix(preds.tolist(), test.labels.tolist()))
