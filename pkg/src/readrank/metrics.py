"""
Evaluation measures for substitution ranking, paraphrase classification,
substitution generation and complex word identification.

All functions are pure and permutation-invariant over instances.
"""

import json
import logging
from collections.abc import Callable, Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.stats import pearsonr
from sklearn.metrics import accuracy_score, precision_recall_fscore_support

from .errors import UndefinedMetricError

logger = logging.getLogger(__name__)


def _check_aligned(first: Sequence, second: Sequence, what: str) -> None:
    if len(first) != len(second):
        raise ValueError(
            f"{what}: length mismatch ({len(first)} predictions vs {len(second)} golds)"
        )


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Pearson correlation coefficient.

    Raises:
        ValueError: If the series differ in length or have fewer than 2 values.
        UndefinedMetricError: If either series has zero variance.
    """
    _check_aligned(x, y, "pearson")
    if len(x) < 2:
        raise ValueError("pearson needs at least 2 values")
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        raise UndefinedMetricError("Undefined correlation: zero variance")
    return float(pearsonr(xs, ys).statistic)


def precision_at_1(
    predicted: Sequence[Sequence[str]], gold: Sequence[Mapping[str, int]]
) -> float:
    """
    Fraction of instances whose predicted simplest candidate is gold-simplest.

    Equivalent to TRank. When several candidates share the best gold rank,
    predicting any of them counts as a hit.
    """
    _check_aligned(predicted, gold, "precision_at_1")
    if not predicted:
        raise ValueError("precision_at_1 needs at least one instance")
    hits = 0
    for ranking, gold_ranks in zip(predicted, gold):
        best = min(gold_ranks.values())
        if ranking and gold_ranks.get(ranking[0]) == best:
            hits += 1
    return hits / len(predicted)


def ranking_pearson(
    predicted: Sequence[Sequence[str]], gold: Sequence[Mapping[str, int]]
) -> float:
    """Pearson between predicted positions and gold ranks, pooled over all candidates."""
    _check_aligned(predicted, gold, "ranking_pearson")
    positions, gold_ranks = [], []
    for ranking, ranks in zip(predicted, gold):
        for position, candidate in enumerate(ranking):
            positions.append(position)
            gold_ranks.append(ranks[candidate])
    return pearson(positions, gold_ranks)


def average_precision(relevance: Sequence[bool]) -> float:
    """
    Average precision of one ranked list against judged relevance flags.

    Precision is taken at each relevant position; a list without relevant
    items scores 0.
    """
    hits = 0
    precisions = []
    for position, relevant in enumerate(relevance, start=1):
        if relevant:
            hits += 1
            precisions.append(hits / position)
    return float(np.mean(precisions)) if precisions else 0.0


class GeneratedListsScore(NamedTuple):
    map: float
    precision_at_1: float
    evaluated: int
    excluded: int
    mean_length: float


def mean_average_precision(ranked_lists: Sequence[Sequence[bool]]) -> float:
    """
    Mean of average precision over targets.

    Targets with no generated candidates are excluded from the mean (and
    logged), following the per-method ``n`` convention.
    """
    return score_generated_lists(ranked_lists).map


def score_generated_lists(ranked_lists: Sequence[Sequence[bool]]) -> GeneratedListsScore:
    """MAP, P@1 and coverage for generated substitution lists."""
    non_empty = [ranking for ranking in ranked_lists if len(ranking) > 0]
    excluded = len(ranked_lists) - len(non_empty)
    if excluded:
        logger.info(f"Excluded {excluded} targets without generated candidates")
    if not non_empty:
        raise UndefinedMetricError("No target has generated candidates")
    return GeneratedListsScore(
        map=float(np.mean([average_precision(r) for r in non_empty])),
        precision_at_1=float(np.mean([bool(r[0]) for r in non_empty])),
        evaluated=len(non_empty),
        excluded=excluded,
        mean_length=float(np.mean([len(r) for r in non_empty])),
    )


def g_score(accuracy: float, recall: float) -> float:
    """Harmonic mean of accuracy and recall (0 when both are 0)."""
    for name, value in (("accuracy", accuracy), ("recall", recall)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    if accuracy + recall == 0:
        return 0.0
    return 2 * accuracy * recall / (accuracy + recall)


@dataclass
class ClassificationReport:
    """
    Per-class precision plus overall accuracy, recall, F1 and G-score.

    ``recall``, ``f_score`` and ``g_score`` refer to the positive class.
    Classes that were never predicted have precision 0 and are listed in
    ``undefined``.
    """

    precision: dict[Hashable, float]
    accuracy: float
    recall: float
    f_score: float
    g_score: float
    undefined: set[Hashable] = field(default_factory=set)
    n: int = 0


def class_precisions(
    predictions: Sequence[Hashable],
    golds: Sequence[Hashable],
    classes: Sequence[Hashable],
    positive: Hashable,
) -> ClassificationReport:
    """
    Confusion-matrix measures for a (multi-)class prediction.

    Example:
        >>> class_precisions([1, 0, -1], [1, 0, 0], classes=[-1, 0, 1], positive=1).accuracy
        0.6666666666666666
    """
    _check_aligned(predictions, golds, "class_precisions")
    if not predictions:
        raise ValueError("class_precisions needs at least one prediction")
    labels = list(classes)
    if positive not in labels:
        labels.append(positive)
    precisions, recalls, f_scores, _ = precision_recall_fscore_support(
        golds, predictions, labels=labels, zero_division=0
    )

    predicted = set(predictions)
    undefined = {label for label in classes if label not in predicted}
    for label in undefined:
        logger.debug(f"Class {label!r} was never predicted; precision reported as 0")

    accuracy = float(accuracy_score(golds, predictions))
    at = labels.index(positive)
    recall = float(recalls[at])
    return ClassificationReport(
        precision={label: float(precisions[i]) for i, label in enumerate(classes)},
        accuracy=accuracy,
        recall=recall,
        f_score=float(f_scores[at]),
        g_score=g_score(accuracy, recall),
        undefined=undefined,
        n=len(predictions),
    )


def paired_bootstrap(
    gold: Sequence,
    predictions_a: Sequence,
    predictions_b: Sequence,
    metric: Callable[[Sequence, Sequence], float],
    n_resamples: int = 10_000,
    seed: int = 0,
) -> float:
    """
    Paired bootstrap significance test that system A beats system B.

    Instances are resampled with replacement; the p-value is the fraction of
    resamples whose metric difference exceeds twice the observed difference.

    Returns:
        The p-value (small values mean A's advantage is significant).
    """
    _check_aligned(predictions_a, gold, "paired_bootstrap")
    _check_aligned(predictions_b, gold, "paired_bootstrap")
    if n_resamples < 1:
        raise ValueError("n_resamples must be >= 1")

    n = len(gold)
    observed = metric(predictions_a, gold) - metric(predictions_b, gold)
    rng = np.random.default_rng(seed)
    exceed = 0
    for _ in range(n_resamples):
        idx = rng.integers(0, n, size=n)
        sample_gold = [gold[i] for i in idx]
        delta = metric([predictions_a[i] for i in idx], sample_gold) - metric(
            [predictions_b[i] for i in idx], sample_gold
        )
        if delta > 2 * observed:
            exceed += 1
    return exceed / n_resamples


@dataclass
class EvalReport:
    """
    Named metric values for one evaluation run.

    Attributes:
        task: Evaluated task name (rank, ppdb, generate, cwi).
        metrics: Metric name -> value.
        n: Number of evaluated instances.
        per_class: Optional class -> {metric: value} breakdown.
    """

    task: str
    metrics: dict[str, float]
    n: int
    per_class: dict[str, dict[str, float]] = field(default_factory=dict)

    COLUMN_WIDTHS = {"metric": 24, "value": 10}

    def to_text(self) -> str:
        """Aligned two-column rendering."""
        w_metric, w_value = self.COLUMN_WIDTHS["metric"], self.COLUMN_WIDTHS["value"]
        lines = [f"{'METRIC':<{w_metric}}  {'VALUE':>{w_value}}"]
        for name, value in self.metrics.items():
            lines.append(f"{name:<{w_metric}}  {value:>{w_value}.4f}")
        for label, values in self.per_class.items():
            for name, value in values.items():
                lines.append(f"{f'{name}[{label}]':<{w_metric}}  {value:>{w_value}.4f}")
        lines.append(f"{'instances':<{w_metric}}  {self.n:>{w_value}d}")
        return "\n".join(lines)

    def to_jsonl(self) -> str:
        """One JSON object per metric, in insertion order."""
        rows = [
            {"task": self.task, "metric": name, "value": value, "n": self.n}
            for name, value in self.metrics.items()
        ]
        rows += [
            {"task": self.task, "metric": name, "class": label, "value": value, "n": self.n}
            for label, values in self.per_class.items()
            for name, value in values.items()
        ]
        return "\n".join(json.dumps(row, sort_keys=True) for row in rows)
