"""
Building the lexicon from raw annotator ratings.

Each rating that differs by ``threshold`` (2 points by default) or more from
the mean of the word's other ratings is discarded before averaging. Agreement
is the Pearson correlation between one annotator and the mean of the others.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InputFormatError, UndefinedMetricError
from ..metrics import pearson
from .lexicon import MAX_SCORE, MIN_SCORE, WordComplexityLexicon

logger = logging.getLogger(__name__)

DISCARD_THRESHOLD = 2.0
_MISSING = {"", "-"}


@dataclass(frozen=True)
class RatingRecord:
    """
    Ratings collected for one word.

    Attributes:
        word: The rated surface form.
        ratings: One slot per annotator position; ``None`` when that annotator
            did not rate the word. Each observed rating is an integer in 1..6.
    """

    word: str
    ratings: tuple[int | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "ratings", tuple(self.ratings))
        if not self.observed:
            raise ValueError(f"Word '{self.word}' has no ratings")
        for rating in self.observed:
            if not MIN_SCORE <= rating <= MAX_SCORE or int(rating) != rating:
                raise ValueError(f"Rating {rating} for '{self.word}' is not in 1..6")

    @property
    def observed(self) -> list[int]:
        return [rating for rating in self.ratings if rating is not None]


def load_ratings(path: str | Path) -> list[RatingRecord]:
    """
    Read a ratings file ``word<TAB>r1<TAB>r2...``.

    Column position identifies the annotator; an empty field or ``-`` marks a
    missing rating.
    """
    records = []
    with open(path, encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            word, *fields = line.split("\t")
            try:
                ratings = tuple(
                    None if value.strip() in _MISSING else int(value) for value in fields
                )
                records.append(RatingRecord(word.strip(), ratings))
            except ValueError as err:
                raise InputFormatError(str(err), path, line_number) from err
    return records


def discard_mask(
    ratings: Sequence[float], threshold: float = DISCARD_THRESHOLD, strict: bool = False
) -> np.ndarray:
    """
    Boolean mask of the ratings to discard.

    A rating is discarded when its distance to the mean of the remaining
    ratings is >= threshold (> threshold when ``strict``). A single rating is
    never discarded.
    """
    values = np.asarray(ratings, dtype=float)
    n = len(values)
    if n < 2:
        return np.zeros(n, dtype=bool)
    rest_means = (values.sum() - values) / (n - 1)
    gaps = np.abs(values - rest_means)
    return gaps > threshold if strict else gaps >= threshold


def aggregate_ratings(
    records: Iterable[RatingRecord],
    threshold: float = DISCARD_THRESHOLD,
    strict: bool = False,
) -> WordComplexityLexicon:
    """
    Average each word's ratings after discarding outliers (single pass).

    Ratings of repeated words are pooled. If every rating of a word would be
    discarded, the plain mean is kept and the word is listed in
    ``lexicon.flagged``.

    Raises:
        ValueError: If no records are given or a word has fewer than 2 ratings.

    Example:
        >>> aggregate_ratings([RatingRecord("muscles", (2, 1, 2, 2, 1))]).entries["muscles"]
        1.6
    """
    pooled: dict[str, list[int]] = {}
    for record in records:
        pooled.setdefault(record.word, []).extend(record.observed)
    if not pooled:
        raise ValueError("Cannot aggregate an empty list of rating records")

    entries = {}
    flagged = set()
    discarded = 0
    total = 0
    for word, ratings in pooled.items():
        if len(ratings) < 2:
            raise ValueError(f"Word '{word}' needs at least 2 ratings, got {len(ratings)}")
        mask = discard_mask(ratings, threshold, strict)
        kept = np.asarray(ratings, dtype=float)[~mask]
        if kept.size == 0:
            flagged.add(word)
            kept = np.asarray(ratings, dtype=float)
        else:
            discarded += int(mask.sum())
        total += len(ratings)
        entries[word] = float(kept.mean())

    logger.info(
        f"Aggregated {len(entries)} words; discarded {discarded}/{total} ratings "
        f"({discarded / total:.1%}), {len(flagged)} words flagged"
    )
    return WordComplexityLexicon(entries, flagged=frozenset(flagged))


def interannotator_agreement(
    records: Sequence[RatingRecord],
    annotator_index: int,
    discard_outliers: bool = False,
    threshold: float = DISCARD_THRESHOLD,
    strict: bool = False,
) -> float:
    """
    Pearson correlation between one annotator and the mean of the others.

    Only words rated by the annotator and at least one other annotator are
    used. With ``discard_outliers``, ratings removed by the aggregation rule
    are dropped from both series first.

    Raises:
        UndefinedMetricError: If fewer than 2 words qualify or a series has zero
            variance.
    """
    own, others = [], []
    for record in records:
        if annotator_index >= len(record.ratings):
            continue
        if record.ratings[annotator_index] is None:
            continue

        positions = [i for i, r in enumerate(record.ratings) if r is not None]
        values = [record.ratings[i] for i in positions]
        keep = np.ones(len(values), dtype=bool)
        if discard_outliers:
            keep = ~discard_mask(values, threshold, strict)

        own_slot = positions.index(annotator_index)
        if not keep[own_slot]:
            continue
        rest = [v for slot, v in enumerate(values) if slot != own_slot and keep[slot]]
        if not rest:
            continue
        own.append(values[own_slot])
        others.append(float(np.mean(rest)))

    if len(own) < 2:
        raise UndefinedMetricError(
            f"Undefined correlation: annotator {annotator_index} rated {len(own)} "
            "comparable words"
        )
    return pearson(own, others)


def mean_agreement(
    records: Sequence[RatingRecord], discard_outliers: bool = False, **rule
) -> float:
    """Average agreement over every annotator position with a defined correlation."""
    width = max((len(record.ratings) for record in records), default=0)
    scores = []
    for index in range(width):
        try:
            scores.append(
                interannotator_agreement(records, index, discard_outliers, **rule)
            )
        except UndefinedMetricError as err:
            logger.info(f"Skipping annotator {index}: {err}")
    if not scores:
        raise UndefinedMetricError("Undefined correlation for every annotator")
    return float(np.mean(scores))
