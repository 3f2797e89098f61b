"""
Readers and record types for the task datasets.

- Substitution ranking: ``sentence<TAB>target<TAB>position<TAB>rank:candidate...``
  (position is the target's token index in the whitespace-split sentence).
- Paraphrase rules: PPDB ``category ||| source ||| target ||| quality ...``
  lines; labelled rules ``category<TAB>source<TAB>target<TAB>label``; scored
  SimplePPDB++ rows ``category<TAB>source<TAB>target<TAB>yhat<TAB>class[<TAB>quality]``.
- Complex word identification: SemEval-2016 ``sentence<TAB>target<TAB>index<TAB>label``
  and the 11-column CWIG3G2 layout.
"""

import logging
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

from ..errors import InputFormatError
from ..predictor.features import WINDOW, ContextWindow

__all__ = [
    "RuleClass",
    "RankingInstance",
    "ParaphraseRule",
    "CWIInstance",
    "PPDB_COLUMNS",
    "read_ranking_instances",
    "parse_ppdb_line",
    "read_ppdb_rules",
    "read_labelled_rules",
    "read_simpleppdb",
    "read_cwi",
    "read_rules",
    "read_candidate_lists",
    "read_labels",
]

logger = logging.getLogger(__name__)

PPDB_SEPARATOR = "|||"
PPDB_COLUMNS = {"category": 0, "source": 1, "target": 2, "quality": 3}
_PPDB_SCORE = re.compile(r"PPDB2\.0Score=(-?[0-9.eE+-]+)")


class RuleClass(IntEnum):
    """Simplicity class of a paraphrase rule source -> target."""

    COMPLICATING = -1
    NO_DIFFERENCE = 0
    SIMPLIFYING = 1

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")

    @classmethod
    def parse(cls, value: str | int) -> "RuleClass":
        """Accepts -1/0/1 or complicating/no-difference/simplifying."""
        text = str(value).strip().lower()
        for member in cls:
            if text in (member.label, str(member.value), f"+{member.value}"):
                return member
        raise ValueError(f"Unknown rule class '{value}'")


@dataclass(frozen=True)
class RankingInstance:
    """
    A target word in context with gold-ranked substitution candidates.

    Attributes:
        sentence: Tokens of the sentence.
        target_index: Position of the target in ``sentence``.
        candidates: Candidate substitutions (at least 2).
        ranks: Gold rank of each candidate (1 = simplest, ties allowed).
    """

    sentence: tuple[str, ...]
    target_index: int
    candidates: tuple[str, ...]
    ranks: tuple[int, ...]

    def __post_init__(self):
        if len(self.candidates) < 2:
            raise ValueError("A ranking instance needs at least 2 candidates")
        if len(self.ranks) != len(self.candidates):
            raise ValueError("Every candidate needs a gold rank")
        if not 0 <= self.target_index < len(self.sentence):
            raise ValueError(
                f"Target index {self.target_index} is outside a sentence of "
                f"{len(self.sentence)} tokens"
            )

    @property
    def target(self) -> str:
        return self.sentence[self.target_index]

    @property
    def gold(self) -> dict[str, int]:
        return dict(zip(self.candidates, self.ranks))

    def context(self) -> ContextWindow:
        """Up to two tokens on each side of the target position."""
        i = self.target_index
        return ContextWindow(
            left=tuple(self.sentence[max(0, i - WINDOW) : i]),
            right=tuple(self.sentence[i + 1 : i + 1 + WINDOW]),
        )


@dataclass
class ParaphraseRule:
    """
    A PPDB paraphrase rule source -> target.

    Attributes:
        category: Syntactic category (e.g. ``[NN]``).
        source: Phrase being replaced.
        target: Replacement phrase.
        quality: PPDB paraphrase quality score.
        label: Gold simplicity class, when annotated.
        yhat: Predicted score (positive means the target is simpler).
        predicted: Class derived from ``yhat``.
    """

    category: str
    source: str
    target: str
    quality: float = 0.0
    label: RuleClass | None = None
    yhat: float | None = None
    predicted: RuleClass | None = None

    @property
    def is_lexical(self) -> bool:
        """Both sides are single words."""
        return len(self.source.split()) == 1 and len(self.target.split()) == 1


@dataclass(frozen=True)
class CWIInstance:
    """
    A target word or phrase in a sentence, labelled simple (0) or complex (1).
    """

    sentence: str
    target: str
    label: int
    start: int | None = None
    end: int | None = None

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"CWI label must be 0 or 1, got {self.label}")
        if self.start is not None and self.end is not None:
            if not 0 <= self.start <= self.end <= len(self.sentence):
                raise ValueError(f"Span {self.start}:{self.end} is outside the sentence")


def _lines(path: str | Path) -> Iterator[tuple[int, str]]:
    with open(path, encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if line.strip() and not line.startswith("#"):
                yield line_number, line


def read_ranking_instances(path: str | Path) -> list[RankingInstance]:
    """
    Raises:
        InputFormatError: On a malformed line (naming its number).
    """
    instances = []
    for line_number, line in _lines(path):
        fields = line.split("\t")
        if len(fields) < 5:
            raise InputFormatError(
                f"expected sentence, target, position and at least 2 candidates, "
                f"found {len(fields)} columns",
                path,
                line_number,
            )
        sentence, target, position = fields[0], fields[1].strip(), fields[2]
        try:
            ranked = [item.split(":", 1) for item in fields[3:] if item.strip()]
            ranks = tuple(int(rank) for rank, _ in ranked)
            candidates = tuple(candidate.strip() for _, candidate in ranked)
            instance = RankingInstance(
                tuple(sentence.split()), int(position), candidates, ranks
            )
        except ValueError as err:
            raise InputFormatError(str(err), path, line_number) from err
        if instance.target != target:
            logger.debug(
                f"Line {line_number}: token at position {position} is "
                f"'{instance.target}', expected '{target}'"
            )
        instances.append(instance)
    logger.info(f"Read {len(instances)} ranking instances from {path}")
    return instances


def _parse_quality(text: str) -> float:
    match = _PPDB_SCORE.search(text)
    return float(match.group(1) if match else text.strip())


def parse_ppdb_line(line: str, columns: Mapping[str, int] = PPDB_COLUMNS) -> ParaphraseRule:
    """
    Parse one ``|||``-separated PPDB line.

    The quality column may hold a number or a feature string containing
    ``PPDB2.0Score=<x>``.

    Raises:
        ValueError: If a mapped column is missing or the quality is not numeric.
    """
    fields = [field.strip() for field in line.split(PPDB_SEPARATOR)]
    needed = max(columns.values()) + 1
    if len(fields) < needed:
        raise ValueError(f"expected at least {needed} '|||' fields, found {len(fields)}")
    source, target = fields[columns["source"]], fields[columns["target"]]
    if not source or not target:
        raise ValueError("empty source or target phrase")
    return ParaphraseRule(
        category=fields[columns["category"]],
        source=source,
        target=target,
        quality=_parse_quality(fields[columns["quality"]]),
    )


def read_ppdb_rules(
    lines: Iterable[str], columns: Mapping[str, int] = PPDB_COLUMNS, start: int = 1
) -> Iterator[ParaphraseRule | None]:
    """
    Parse PPDB lines lazily, yielding None (and logging) for malformed ones.

    ``start`` is the line number of the first line in the input file, so
    warnings point at the right line when ``lines`` is a slice of it.
    """
    for line_number, line in enumerate(lines, start=start):
        try:
            yield parse_ppdb_line(line, columns)
        except ValueError as err:
            logger.warning(f"Skipping malformed rule at line {line_number}: {err}")
            yield None


def read_labelled_rules(path: str | Path) -> list[ParaphraseRule]:
    """
    Raises:
        InputFormatError: On a wrong column count or an unknown label.
    """
    rules = []
    for line_number, line in _lines(path):
        fields = line.split("\t")
        if len(fields) != 4:
            raise InputFormatError(
                f"expected 4 columns, found {len(fields)}", path, line_number
            )
        category, source, target, label = (field.strip() for field in fields)
        try:
            rules.append(ParaphraseRule(category, source, target, label=RuleClass.parse(label)))
        except ValueError as err:
            raise InputFormatError(str(err), path, line_number) from err
    logger.info(f"Read {len(rules)} labelled rules from {path}")
    return rules


def read_simpleppdb(path: str | Path) -> Iterator[ParaphraseRule]:
    """
    Stream scored rules written by build_simpleppdb.

    Raises:
        InputFormatError: On a malformed row.
    """
    for line_number, line in _lines(path):
        fields = line.split("\t")
        if len(fields) not in (5, 6):
            raise InputFormatError(
                f"expected 5 or 6 columns, found {len(fields)}", path, line_number
            )
        try:
            yield ParaphraseRule(
                category=fields[0],
                source=fields[1],
                target=fields[2],
                quality=float(fields[5]) if len(fields) == 6 else 0.0,
                yhat=float(fields[3]),
                predicted=RuleClass.parse(fields[4]),
            )
        except ValueError as err:
            raise InputFormatError(str(err), path, line_number) from err


def _parse_label(text: str) -> int:
    value = text.strip().lower()
    if value in ("1", "complex"):
        return 1
    if value in ("0", "simple"):
        return 0
    raise ValueError(f"unknown CWI label '{text}'")


def read_cwi(path: str | Path, layout: str = "auto") -> list[CWIInstance]:
    """
    Read CWI data in the SemEval-2016 (4 columns) or CWIG3G2 (11 columns) layout.

    Args:
        layout: ``semeval2016``, ``cwig3g2`` or ``auto`` (by column count).

    Raises:
        InputFormatError: On a row that fits neither layout.
    """
    if layout not in ("auto", "semeval2016", "cwig3g2"):
        raise ValueError(f"Unknown CWI layout '{layout}'")
    instances = []
    for line_number, line in _lines(path):
        fields = line.split("\t")
        try:
            if len(fields) == 4 and layout in ("auto", "semeval2016"):
                sentence, target, index, label = fields
                tokens = sentence.split()
                position = int(index)
                if not 0 <= position < len(tokens):
                    raise ValueError(f"target index {position} outside the sentence")
                start = len(" ".join(tokens[:position])) + (1 if position else 0)
                instances.append(
                    CWIInstance(sentence, target.strip(), _parse_label(label), start, start + len(tokens[position]))
                )
            elif len(fields) == 11 and layout in ("auto", "cwig3g2"):
                sentence, start, end, target = fields[1], int(fields[2]), int(fields[3]), fields[4]
                instances.append(
                    CWIInstance(sentence, target.strip(), _parse_label(fields[9]), start, end)
                )
            else:
                raise ValueError(f"{len(fields)} columns do not match the {layout} layout")
        except ValueError as err:
            raise InputFormatError(str(err), path, line_number) from err
    logger.info(f"Read {len(instances)} CWI instances from {path}")
    return instances


def read_rules(path: str | Path, columns: Mapping[str, int] = PPDB_COLUMNS) -> list[ParaphraseRule]:
    """
    Read labelled rules or raw PPDB lines, detected from the first data line.

    Malformed PPDB lines are skipped with a warning.
    """
    first = next((line for _, line in _lines(path)), "")
    if PPDB_SEPARATOR not in first:
        return read_labelled_rules(path)
    rules = [
        rule
        for rule in read_ppdb_rules((line for _, line in _lines(path)), columns)
        if rule is not None
    ]
    logger.info(f"Read {len(rules)} PPDB rules from {path}")
    return rules


def read_candidate_lists(path: str | Path) -> list[tuple[str, list[str]]]:
    """
    ``key<TAB>candidate...`` lines, as written by ``rank`` and ``generate``
    and used for generation gold files. A key may have no candidates.
    """
    rows = []
    for _, line in _lines(path):
        key, *candidates = line.split("\t")
        rows.append((key.strip(), [c.strip() for c in candidates if c.strip()]))
    return rows


def read_labels(path: str | Path) -> list[int]:
    """
    Binary labels from the last column of ``target<TAB>label`` lines.

    Raises:
        InputFormatError: On a label other than 0/1/simple/complex.
    """
    labels = []
    for line_number, line in _lines(path):
        try:
            labels.append(_parse_label(line.split("\t")[-1]))
        except ValueError as err:
            raise InputFormatError(str(err), path, line_number) from err
    return labels
