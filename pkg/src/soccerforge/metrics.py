"""Classification metrics: confusion matrices, per-class and aggregate scores.

Truth rows span the task's labels; prediction columns add a sentinel for
answers matching no label. Per-class precision/recall/F1 use the
0-for-empty-denominator convention. Aggregates follow the closed forms:
kappa = (p_o - p_e)/(1 - p_e) with marginal-product chance agreement,
multiclass MCC in covariance form, hamming loss = 1 - accuracy. Kappa
and MCC are evaluated on integer-rearranged ratios so small hand-checked
fixtures come out bit-exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SoccerForgeError
from .judging import ClassSet


class MetricsError(SoccerForgeError):
    pass


class LengthMismatch(MetricsError):
    pass


class UnknownTruthLabel(MetricsError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with truth on rows; prediction columns include the sentinel."""

    classes: ClassSet
    counts: tuple[tuple[int, ...], ...]  # len(labels) rows x len(labels)+1 cols

    @property
    def row_labels(self) -> tuple[str, ...]:
        return self.classes.labels

    @property
    def col_labels(self) -> tuple[str, ...]:
        return self.classes.labels + (self.classes.wrong_sentinel,)

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def support(self, i: int) -> int:
        return sum(self.counts[i])


def confusion(
    truth: Sequence[str], pred: Sequence[str], classes: ClassSet
) -> ConfusionMatrix:
    """Tally a confusion matrix; off-vocabulary predictions hit the sentinel."""
    if len(truth) != len(pred):
        raise LengthMismatch(f"{len(truth)} truth labels vs {len(pred)} predictions")
    index = {label: i for i, label in enumerate(classes.labels)}
    n_labels = len(classes.labels)
    counts = [[0] * (n_labels + 1) for _ in range(n_labels)]
    for t, p in zip(truth, pred):
        if t not in index:
            raise UnknownTruthLabel(f"truth label {t!r} not in class set")
        col = index.get(p, n_labels)
        counts[index[t]][col] += 1
    return ConfusionMatrix(classes, tuple(tuple(row) for row in counts))


@dataclass(frozen=True)
class ClassReport:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    per_class: tuple[ClassReport, ...]  # labels plus the sentinel row
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    cohen_kappa: float
    mcc: float
    hamming_loss: float
    degenerate_kappa: bool = False


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def _f1(precision: float, recall: float) -> float:
    return _safe_div(2 * precision * recall, precision + recall)


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Full metric suite from a confusion matrix (total count must be >= 1)."""
    n = cm.total
    if n < 1:
        raise MetricsError("confusion matrix is empty")
    n_labels = len(cm.classes.labels)
    n_cols = n_labels + 1

    # sentinel participates as a class with zero truth support
    truth_counts = [cm.support(i) for i in range(n_labels)] + [0]
    pred_counts = [
        sum(cm.counts[r][c] for r in range(n_labels)) for c in range(n_cols)
    ]
    diag = [cm.counts[i][i] for i in range(n_labels)] + [0]
    correct = sum(diag)

    per_class = []
    for i, label in enumerate(cm.col_labels):
        precision = _safe_div(diag[i], pred_counts[i])
        recall = _safe_div(diag[i], truth_counts[i])
        per_class.append(
            ClassReport(label, precision, recall, _f1(precision, recall), truth_counts[i])
        )

    k = len(per_class)
    macro_p = sum(c.precision for c in per_class) / k
    macro_r = sum(c.recall for c in per_class) / k
    macro_f = sum(c.f1 for c in per_class) / k
    weighted_p = sum(c.precision * c.support for c in per_class) / n
    weighted_r = sum(c.recall * c.support for c in per_class) / n
    weighted_f = sum(c.f1 * c.support for c in per_class) / n

    accuracy = correct / n
    hamming = 1.0 - accuracy

    # integer-rearranged ratios keep small fixtures exact in IEEE floats
    chance = sum(t * p for t, p in zip(truth_counts, pred_counts))
    degenerate = n * n == chance
    kappa = 0.0 if degenerate else (n * correct - chance) / (n * n - chance)

    mcc_num = n * correct - chance
    mcc_den2 = (n * n - sum(p * p for p in pred_counts)) * (
        n * n - sum(t * t for t in truth_counts)
    )
    mcc = _safe_div(mcc_num, math.sqrt(mcc_den2)) if mcc_den2 > 0 else 0.0

    return MetricsReport(
        per_class=tuple(per_class),
        accuracy=accuracy,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f,
        weighted_precision=weighted_p,
        weighted_recall=weighted_r,
        weighted_f1=weighted_f,
        cohen_kappa=kappa,
        mcc=mcc,
        hamming_loss=hamming,
        degenerate_kappa=degenerate,
    )


@dataclass(frozen=True)
class PerClassRow:
    """One row of a published per-class report: label, P, R, support."""

    label: str
    precision: float
    recall: float
    support: int


@dataclass(frozen=True)
class AggregateReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    total_support: int


def aggregate_per_class(rows: Sequence[PerClassRow]) -> AggregateReport:
    """Aggregate a per-class P/R/support table the way metrics() would.

    Per-class F1 is recomputed from P and R; weighted aggregates are
    support-weighted means, macro aggregates plain means; accuracy equals
    support-weighted recall (total correct over total support).
    """
    if not rows:
        raise MetricsError("no per-class rows to aggregate")
    total = sum(r.support for r in rows)
    if total < 1:
        raise MetricsError("total support must be >= 1")
    f1s = [_f1(r.precision, r.recall) for r in rows]
    k = len(rows)
    return AggregateReport(
        accuracy=sum(r.recall * r.support for r in rows) / total,
        macro_precision=sum(r.precision for r in rows) / k,
        macro_recall=sum(r.recall for r in rows) / k,
        macro_f1=sum(f1s) / k,
        weighted_precision=sum(r.precision * r.support for r in rows) / total,
        weighted_recall=sum(r.recall * r.support for r in rows) / total,
        weighted_f1=sum(f * r.support for f, r in zip(f1s, rows)) / total,
        total_support=total,
    )


@dataclass(frozen=True)
class ScoreDistribution:
    """Summary statistics backing one violin in the score plots."""

    model: str
    n: int
    mean: float
    stddev: float
    min: float
    q1: float
    median: float
    q3: float
    max: float


def score_stats(scores: Sequence[int | float], model: str = "") -> ScoreDistribution:
    """Population mean/stddev plus linearly interpolated quartiles."""
    if not scores:
        raise MetricsError("score_stats needs at least one score")
    arr = np.asarray(scores, dtype=float)
    q1, median, q3 = np.percentile(arr, [25, 50, 75])
    return ScoreDistribution(
        model=model,
        n=len(scores),
        mean=float(arr.mean()),
        stddev=float(arr.std()),
        min=float(arr.min()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        max=float(arr.max()),
    )


# ---------------------------------------------------------------------------
# report files


def write_per_class_csv(report: MetricsReport, fh) -> None:
    """Per-class table in the Class/Precision/Recall/F1/Support layout."""
    writer = csv.writer(fh)
    writer.writerow(["Class", "Precision", "Recall", "F1", "Support"])
    for row in report.per_class:
        writer.writerow(
            [row.label, f"{row.precision:.4f}", f"{row.recall:.4f}", f"{row.f1:.4f}", row.support]
        )
    total = sum(r.support for r in report.per_class)
    writer.writerow(["Accuracy", "", "", f"{report.accuracy:.4f}", total])
    writer.writerow(
        [
            "Macro avg",
            f"{report.macro_precision:.4f}",
            f"{report.macro_recall:.4f}",
            f"{report.macro_f1:.4f}",
            total,
        ]
    )
    writer.writerow(
        [
            "Weighted avg",
            f"{report.weighted_precision:.4f}",
            f"{report.weighted_recall:.4f}",
            f"{report.weighted_f1:.4f}",
            total,
        ]
    )


SUMMARY_COLUMNS = [
    "Model",
    "Precision (wt)",
    "Recall (wt)",
    "F1 Score (wt)",
    "Cohen Kappa",
    "MCC",
    "Hamming Loss",
]


def write_summary_csv(rows: Sequence[tuple[str, MetricsReport]], fh) -> None:
    """One row per model with the weighted/agreement column set."""
    writer = csv.writer(fh)
    writer.writerow(SUMMARY_COLUMNS)
    for model, report in rows:
        writer.writerow(
            [
                model,
                f"{report.weighted_precision:.4f}",
                f"{report.weighted_recall:.4f}",
                f"{report.weighted_f1:.4f}",
                f"{report.cohen_kappa:.4f}",
                f"{report.mcc:.4f}",
                f"{report.hamming_loss:.4f}",
            ]
        )


def write_violin_csv(distributions: Sequence[ScoreDistribution], fh) -> None:
    """Plot-ready score distributions: one row per (model, statistic)."""
    writer = csv.writer(fh)
    writer.writerow(["model", "statistic", "value"])
    for dist in distributions:
        for stat in ("n", "mean", "stddev", "min", "q1", "median", "q3", "max"):
            writer.writerow([dist.model, stat, getattr(dist, stat)])
