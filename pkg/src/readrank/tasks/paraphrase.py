"""
Paraphrase rule simplicity: three-way classification, vocabulary-disjoint
cross-validation and substitution generation from scored rules.

A rule source -> target is scored as the pair (source, target), so a positive
score means the target is simpler than the source.
"""

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..metrics import EvalReport, class_precisions
from ..predictor import (
    NRRPredictor,
    PairFeatures,
    PhraseFeatureExtractor,
    Predictor,
    TrainConfig,
    train_nrr,
)
from .datasets import ParaphraseRule, RuleClass

__all__ = [
    "RuleThresholds",
    "QUALITY_WORD",
    "QUALITY_PHRASE",
    "classify_score",
    "classify_rule",
    "score_rules",
    "rule_training_set",
    "vocabulary_disjoint_folds",
    "select_symmetric_threshold",
    "cross_validate_rules",
    "Substitution",
    "generate_substitutions",
]

logger = logging.getLogger(__name__)

QUALITY_WORD = 3.5
QUALITY_PHRASE = 4.0


@dataclass(frozen=True)
class RuleThresholds:
    """Scores strictly below ``low`` are complicating, strictly above ``high`` simplifying."""

    low: float = -0.4
    high: float = 0.4

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError(f"Low threshold {self.low} exceeds high threshold {self.high}")


def classify_score(yhat: float, thresholds: RuleThresholds = RuleThresholds()) -> RuleClass:
    """
    Example:
        >>> classify_score(-0.4).label
        'no-difference'
    """
    if yhat < thresholds.low:
        return RuleClass.COMPLICATING
    if yhat > thresholds.high:
        return RuleClass.SIMPLIFYING
    return RuleClass.NO_DIFFERENCE


def score_rules(
    predictor: Predictor,
    rules: Sequence[ParaphraseRule],
    extractor: PhraseFeatureExtractor,
    thresholds: RuleThresholds = RuleThresholds(),
) -> list[ParaphraseRule]:
    """Fill ``yhat`` and ``predicted`` of every rule (in place) and return them."""
    if not rules:
        return []
    features = [extractor.extract_pair(rule.source, rule.target) for rule in rules]
    for rule, yhat in zip(rules, predictor.predict(features)):
        rule.yhat = float(yhat)
        rule.predicted = classify_score(rule.yhat, thresholds)
    return list(rules)


def classify_rule(
    predictor: Predictor,
    rule: ParaphraseRule,
    extractor: PhraseFeatureExtractor,
    thresholds: RuleThresholds = RuleThresholds(),
) -> RuleClass:
    return score_rules(predictor, [rule], extractor, thresholds)[0].predicted


def rule_training_set(
    rules: Sequence[ParaphraseRule], extractor: PhraseFeatureExtractor
) -> tuple[list[PairFeatures], np.ndarray]:
    """
    Raises:
        ValueError: If a rule has no gold label.
    """
    for rule in rules:
        if rule.label is None:
            raise ValueError(f"Rule '{rule.source} -> {rule.target}' has no label")
    features = [extractor.extract_pair(rule.source, rule.target) for rule in rules]
    return features, np.asarray([int(rule.label) for rule in rules], dtype=float)


def vocabulary_disjoint_folds(
    rules: Sequence[ParaphraseRule], k: int = 10, seed: int = 0
) -> list[np.ndarray]:
    """
    Split rule indices into k folds so that no phrase occurs in two folds.

    Rules sharing a phrase (directly or through a chain of rules) form one
    component; components are shuffled with ``seed`` and each goes to the
    currently smallest fold.

    Raises:
        ValueError: If k < 2 or there are fewer components than folds.
    """
    if k < 2:
        raise ValueError(f"Need at least 2 folds, got {k}")
    parent: dict[str, str] = {}

    def find(phrase: str) -> str:
        parent.setdefault(phrase, phrase)
        while parent[phrase] != phrase:
            parent[phrase] = parent[parent[phrase]]
            phrase = parent[phrase]
        return phrase

    for rule in rules:
        root_a, root_b = find(rule.source.lower()), find(rule.target.lower())
        if root_a != root_b:
            parent[max(root_a, root_b)] = min(root_a, root_b)

    components: dict[str, list[int]] = {}
    for index, rule in enumerate(rules):
        components.setdefault(find(rule.source.lower()), []).append(index)
    if len(components) < k:
        raise ValueError(
            f"Only {len(components)} vocabulary components; cannot build {k} disjoint folds"
        )

    groups = [components[root] for root in sorted(components)]
    order = np.random.default_rng(seed).permutation(len(groups))
    folds: list[list[int]] = [[] for _ in range(k)]
    for group_index in order:
        smallest = min(range(k), key=lambda f: (len(folds[f]), f))
        folds[smallest].extend(groups[group_index])
    return [np.asarray(sorted(fold), dtype=int) for fold in folds]


def _accuracy(yhat: np.ndarray, labels: np.ndarray, t: float) -> float:
    thresholds = RuleThresholds(-t, t)
    predicted = np.array([int(classify_score(v, thresholds)) for v in yhat])
    return float(np.mean(predicted == labels))


def select_symmetric_threshold(
    scores: Sequence[float],
    labels: Sequence[int],
    candidates: Iterable[float] | None = None,
) -> float:
    """
    Threshold t (classes split at -t and t) maximising accuracy; the smallest
    t wins ties.
    """
    yhat = np.asarray(scores, dtype=float)
    gold = np.asarray(labels, dtype=int)
    if yhat.size == 0:
        raise ValueError("Cannot select a threshold without scores")
    grid = sorted(np.round(np.arange(0.05, 1.0001, 0.05), 2) if candidates is None else candidates)
    accuracies = [_accuracy(yhat, gold, t) for t in grid]
    best = grid[int(np.argmax(accuracies))]
    logger.debug(f"Selected threshold ±{best} (accuracy {max(accuracies):.4f})")
    return float(best)


def cross_validate_rules(
    rules: Sequence[ParaphraseRule],
    extractor: PhraseFeatureExtractor,
    config: TrainConfig,
    k: int = 10,
    thresholds: RuleThresholds = RuleThresholds(),
    on_fold: Callable[[int], None] | None = None,
) -> EvalReport:
    """
    Train and test on vocabulary-disjoint folds, pooling the test predictions.

    The report holds accuracy and the precision of each class.
    """
    features, labels = rule_training_set(rules, extractor)
    folds = vocabulary_disjoint_folds(rules, k, config.seed)
    predicted = np.zeros(len(rules), dtype=int)
    for fold_index, test_idx in enumerate(folds):
        train_idx = np.setdiff1d(np.arange(len(rules)), test_idx)
        model = train_nrr(
            [features[i] for i in train_idx],
            labels[train_idx],
            extractor.schema,
            config,
            task="ppdb",
        )
        scores = NRRPredictor(model=model).predict([features[i] for i in test_idx])
        predicted[test_idx] = [int(classify_score(v, thresholds)) for v in scores]
        logger.info(f"Fold {fold_index + 1}/{k}: {len(test_idx)} test rules")
        if on_fold is not None:
            on_fold(fold_index)

    report = class_precisions(
        predicted.tolist(), labels.astype(int).tolist(), classes=[-1, 0, 1], positive=1
    )
    return EvalReport(
        task="ppdb",
        metrics={
            "accuracy": report.accuracy,
            "precision[+1]": report.precision[1],
            "precision[-1]": report.precision[-1],
            "precision[0]": report.precision[0],
        },
        n=report.n,
    )


class Substitution(NamedTuple):
    candidate: str
    yhat: float
    quality: float


def _quality_threshold(rule: ParaphraseRule) -> float:
    return QUALITY_WORD if rule.is_lexical else QUALITY_PHRASE


def generate_substitutions(
    target: str,
    rules: Iterable[ParaphraseRule],
    category: str | None = None,
    only_simplifying: bool = False,
    predictor: Predictor | None = None,
    extractor: PhraseFeatureExtractor | None = None,
) -> list[Substitution]:
    """
    Candidate substitutions of ``target``, most simplifying first.

    Rules must rewrite ``target`` (case-insensitive), pass the quality
    threshold (>= 3.5 for word-to-word rules, >= 4.0 otherwise) and, when
    ``category`` is given, carry that syntactic category. Rules without a
    score are scored with ``predictor`` and ``extractor``. A candidate reached
    by several rules keeps its best score; ties are ordered by candidate text.

    Raises:
        ValueError: If unscored rules remain and no predictor is given.
    """
    key = target.strip().lower()
    matching = [
        rule
        for rule in rules
        if rule.source.strip().lower() == key
        and rule.target.strip().lower() != key
        and rule.quality >= _quality_threshold(rule)
        and (category is None or rule.category == category)
    ]
    unscored = [rule for rule in matching if rule.yhat is None]
    if unscored:
        if predictor is None or extractor is None:
            raise ValueError("Unscored rules need a predictor and a feature extractor")
        score_rules(predictor, unscored, extractor)

    best: dict[str, Substitution] = {}
    for rule in matching:
        predicted = rule.predicted if rule.predicted is not None else classify_score(rule.yhat)
        if only_simplifying and predicted != RuleClass.SIMPLIFYING:
            continue
        current = best.get(rule.target)
        if current is None or (rule.yhat, rule.quality) > (current.yhat, current.quality):
            best[rule.target] = Substitution(rule.target, rule.yhat, rule.quality)
    return sorted(best.values(), key=lambda s: (-s.yhat, s.candidate))
