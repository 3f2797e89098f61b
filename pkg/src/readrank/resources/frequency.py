"""
Token and n-gram count tables (Google n-grams, Simple and normal Wikipedia).

Tables are read from two-column TSV files ``token<TAB>count``; multi-word
entries are stored with single spaces between their words.
"""

import csv
import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

import pandas as pd

from ..errors import InputFormatError

__all__ = [
    "FrequencyTable",
    "load_frequency_table",
    "relative_frequency",
    "log_frequency",
]

logger = logging.getLogger(__name__)

RELATIVE_ALPHA = 1.0


@dataclass(frozen=True)
class FrequencyTable:
    """
    Immutable token -> count map.

    Attributes:
        counts: Read-only mapping token -> non-negative count.
        total: Sum of all counts (computed).
        source: Path the table was loaded from, if any.
    """

    counts: Mapping[str, int]
    source: str | None = None
    total: int = field(init=False)

    def __post_init__(self):
        for token, count in self.counts.items():
            if count < 0:
                raise ValueError(f"Negative count {count} for '{token}'")
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))
        object.__setattr__(self, "total", int(sum(self.counts.values())))

    def __len__(self) -> int:
        return len(self.counts)

    def count(self, token: str) -> int:
        """Count of the exact form, falling back to lowercase; 0 when absent."""
        value = self.counts.get(token)
        if value is None and token.lower() != token:
            value = self.counts.get(token.lower())
        return value or 0


def load_frequency_table(path: str | Path) -> FrequencyTable:
    """
    Load a count table. Counts of duplicated tokens are summed.

    Raises:
        InputFormatError: If a row does not have two columns or its count is not
            a non-negative integer.
    """
    try:
        frame = pd.read_csv(
            path,
            sep="\t",
            header=None,
            names=["token", "count"],
            dtype={"token": str, "count": str},
            keep_default_na=False,
            quoting=csv.QUOTE_NONE,
            encoding="utf-8",
            on_bad_lines="error",
        )
    except pd.errors.EmptyDataError:
        logger.warning(f"Frequency table {path} is empty")
        return FrequencyTable({}, source=str(path))
    except pd.errors.ParserError as err:
        raise InputFormatError(f"malformed count table ({err})", path) from err
    if frame.empty:
        logger.warning(f"Frequency table {path} is empty")
        return FrequencyTable({}, source=str(path))

    counts = pd.to_numeric(frame["count"], errors="coerce")
    invalid = counts.isna() | (counts < 0) | (counts % 1 != 0)
    if invalid.any():
        row = int(invalid.to_numpy().argmax())
        raise InputFormatError(
            f"invalid count '{frame['count'].iloc[row]}'", path, row + 1
        )

    frame["count"] = counts.astype("int64")
    summed = frame.groupby("token", sort=False)["count"].sum()
    if len(summed) < len(frame):
        logger.debug(f"Summed {len(frame) - len(summed)} duplicate tokens in {path}")

    table = FrequencyTable(
        {token: int(count) for token, count in summed.items()}, source=str(path)
    )
    logger.info(f"Loaded {len(table)} counts ({table.total} total) from {path}")
    return table


def relative_frequency(
    simple: FrequencyTable,
    normal: FrequencyTable,
    token: str,
    alpha: float = RELATIVE_ALPHA,
) -> float:
    """
    Smoothed ratio of simple-corpus to normal-corpus counts.

    Example:
        >>> relative_frequency(FrequencyTable({"x": 10}), FrequencyTable({"x": 1000}), "x")
        0.01098901098901099
    """
    return (simple.count(token) + alpha) / (normal.count(token) + alpha)


def log_frequency(table: FrequencyTable, token: str) -> float:
    """log10(count + 1)."""
    return math.log10(table.count(token) + 1)
