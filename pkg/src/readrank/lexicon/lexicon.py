"""
Word-complexity lexicon: human ratings averaged on a 6-point Likert scale.

The lexicon file is UTF-8 TSV (``word<TAB>score``) with optional ``#`` comment
lines. Scores range from 1.0 (very simple) to 6.0 (very complex).
"""

import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import NamedTuple

from ..errors import InputFormatError
from ..text import tokenize
from .lemmatizers import Lemmatizer

__all__ = [
    "MIN_SCORE",
    "MAX_SCORE",
    "WordComplexityLexicon",
    "LookupResult",
    "load_lexicon",
    "save_lexicon",
    "lookup",
    "longest_word",
]

logger = logging.getLogger(__name__)

MIN_SCORE = 1.0
MAX_SCORE = 6.0


@dataclass(frozen=True)
class WordComplexityLexicon:
    """
    Immutable map from surface word to averaged complexity score.

    Attributes:
        entries: Read-only mapping word -> score in [1.0, 6.0].
        source: Path the lexicon was loaded from, if any.
        flagged: Words whose every rating was an outlier (plain mean kept).
    """

    entries: Mapping[str, float]
    source: str | None = None
    flagged: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        for word, score in self.entries.items():
            if not MIN_SCORE <= score <= MAX_SCORE:
                raise ValueError(f"Score {score} for '{word}' is outside [1, 6]")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def score_of(self, word: str) -> float | None:
        """Exact form first, then lowercase."""
        score = self.entries.get(word)
        if score is None and word.lower() != word:
            score = self.entries.get(word.lower())
        return score


class LookupResult(NamedTuple):
    present: bool
    score: float


def load_lexicon(path: str | Path) -> WordComplexityLexicon:
    """
    Load a lexicon from a two-column TSV file.

    Raises:
        InputFormatError: On a row with the wrong column count, a non-numeric
            score or a score outside [1, 6]. The message names the line number.
    """
    entries: dict[str, float] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            columns = line.split("\t")
            if len(columns) != 2:
                raise InputFormatError(
                    f"expected 2 columns, found {len(columns)}", path, line_number
                )
            word, raw_score = columns[0].strip(), columns[1].strip()
            try:
                score = float(raw_score)
            except ValueError:
                raise InputFormatError(
                    f"non-numeric score '{raw_score}'", path, line_number
                ) from None
            if not MIN_SCORE <= score <= MAX_SCORE:
                raise InputFormatError(
                    f"score out of range ({score})", path, line_number
                )
            if word in entries:
                logger.warning(f"Duplicate lexicon entry '{word}' at line {line_number}")
                continue
            entries[word] = score

    if not entries:
        logger.warning(f"Lexicon {path} is empty")
    else:
        logger.info(f"Loaded {len(entries)} lexicon entries from {path}")
    return WordComplexityLexicon(entries, source=str(path))


def save_lexicon(lexicon: WordComplexityLexicon, path: str | Path) -> None:
    """Write the lexicon as sorted TSV with a comment header."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("# readrank lexicon\tword\tscore\n")
        for word in sorted(lexicon.entries):
            f.write(f"{word}\t{round(lexicon.entries[word], 4):g}\n")


def longest_word(phrase: str) -> str:
    """Longest token of a phrase (first one on ties)."""
    tokens = tokenize(phrase) or [phrase.strip()]
    return max(tokens, key=len)


def lookup(
    lexicon: WordComplexityLexicon,
    phrase: str,
    lemmatizer: Lemmatizer | None = None,
) -> LookupResult:
    """
    Look up the complexity of a word or phrase.

    Multi-word phrases are represented by their longest word. When the word is
    absent, its lemma is tried if a lemmatizer is given. Out-of-vocabulary
    inputs return ``LookupResult(False, 0.0)``.

    Example:
        >>> lookup(lexicon, "the cortex region")
        LookupResult(present=True, score=4.2)
    """
    if not phrase.strip():
        raise ValueError("Cannot look up an empty phrase")

    word = longest_word(phrase)
    score = lexicon.score_of(word)
    if score is None and lemmatizer is not None:
        lemma = lemmatizer.lemmatize(word)
        if lemma != word:
            score = lexicon.score_of(lemma)

    if score is None:
        return LookupResult(False, 0.0)
    return LookupResult(True, score)
