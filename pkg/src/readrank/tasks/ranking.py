"""
Substitution ranking with pairwise scores.

Every ordered candidate pair (c_a, c_b) is scored; the ranking score of a
candidate is R(c_a) = sum over c_b != c_a of S(c_a, c_b), and candidates are
listed by increasing R (simplest first), ties broken by candidate text.
"""

import logging
from collections.abc import Sequence
from itertools import permutations
from typing import NamedTuple

import numpy as np

from ..predictor import ContextWindow, PairFeatures, PhraseFeatureExtractor, Predictor
from .datasets import RankingInstance

__all__ = [
    "RankingPair",
    "RankedCandidate",
    "build_ranking_pairs",
    "ranking_training_set",
    "aggregate_scores",
    "rank_candidates",
]

logger = logging.getLogger(__name__)


class RankingPair(NamedTuple):
    instance: int
    a: str
    b: str
    label: float


class RankedCandidate(NamedTuple):
    candidate: str
    score: float


def build_ranking_pairs(instances: Sequence[RankingInstance]) -> list[RankingPair]:
    """
    Both orderings of every candidate pair, labelled with the rank difference.

    Example:
        >>> [p.label for p in build_ranking_pairs([instance])]  # ranks bad:1, awful:2
        [-1.0, 1.0]
    """
    pairs = []
    for index, instance in enumerate(instances):
        gold = list(zip(instance.candidates, instance.ranks))
        for (a, rank_a), (b, rank_b) in permutations(gold, 2):
            pairs.append(RankingPair(index, a, b, float(rank_a - rank_b)))
    return pairs


def _pair_features(
    extractor: PhraseFeatureExtractor,
    instance: RankingInstance,
    pairs: Sequence[tuple[str, str]],
    use_context: bool,
) -> list[PairFeatures]:
    context: ContextWindow | None = instance.context() if use_context else None
    return [extractor.extract_pair(a, b, (context, context)) for a, b in pairs]


def ranking_training_set(
    instances: Sequence[RankingInstance],
    extractor: PhraseFeatureExtractor,
    use_context: bool = True,
) -> tuple[list[PairFeatures], np.ndarray]:
    """Pair features and labels for every ordered pair of every instance."""
    features: list[PairFeatures] = []
    labels = []
    for instance in instances:
        pairs = build_ranking_pairs([instance])
        features += _pair_features(
            extractor, instance, [(p.a, p.b) for p in pairs], use_context
        )
        labels += [p.label for p in pairs]
    logger.info(f"Built {len(features)} ranking pairs from {len(instances)} instances")
    return features, np.asarray(labels, dtype=float)


def aggregate_scores(
    candidates: Sequence[str], scores: np.ndarray
) -> list[RankedCandidate]:
    """
    Order candidates from a full pairwise score matrix.

    Args:
        candidates: Candidate texts.
        scores: ``scores[i, j]`` = S(candidates[i], candidates[j]); the diagonal
            is ignored.
    """
    scores = np.asarray(scores, dtype=float)
    n = len(candidates)
    if scores.shape != (n, n):
        raise ValueError(f"Expected a {n}x{n} score matrix, got {scores.shape}")
    totals = scores.sum(axis=1) - np.diag(scores)
    ranked = sorted(zip(candidates, totals.tolist()), key=lambda item: (item[1], item[0]))
    return [RankedCandidate(candidate, score) for candidate, score in ranked]


def rank_candidates(
    predictor: Predictor,
    instance: RankingInstance,
    extractor: PhraseFeatureExtractor,
    use_context: bool = True,
) -> list[RankedCandidate]:
    """
    Rank an instance's candidates, simplest first.

    Raises:
        ValueError: If the instance has fewer than 2 candidates.
        SchemaMismatchError: If the extractor schema differs from the model's.
    """
    candidates = list(instance.candidates)
    if len(candidates) < 2:
        raise ValueError("Ranking needs at least 2 candidates")
    index_pairs = list(permutations(range(len(candidates)), 2))
    features = _pair_features(
        extractor,
        instance,
        [(candidates[i], candidates[j]) for i, j in index_pairs],
        use_context,
    )
    predictions = predictor.predict(features)

    scores = np.zeros((len(candidates), len(candidates)))
    for (i, j), value in zip(index_pairs, predictions):
        scores[i, j] = value
    return aggregate_scores(candidates, scores)
