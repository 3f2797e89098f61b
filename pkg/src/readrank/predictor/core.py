"""
Assembling pair features into network inputs.

Each pair contributes, for every scalar feature, the value of both sides and
their difference (``a:<name>``, ``b:<name>``, ``diff:<name>``), plus the
embedding cosine. These columns are Gaussian-binned (or used raw when binning
is off). The embedding difference vector is appended unbinned.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..errors import SchemaMismatchError
from .binning import BinnerConfig, GaussianBinner
from .features import PairFeatures, PhraseFeatureExtractor

__all__ = ["PairVectorizer", "pair_frame", "build_pairs"]

logger = logging.getLogger(__name__)

PAIR_SIDES = (("a", "f_a"), ("b", "f_b"), ("diff", "diffs"))


def pair_frame(pairs: Sequence[PairFeatures]) -> pd.DataFrame:
    """
    Scalar pair columns, one row per pair.

    Example:
        >>> pair_frame([pair]).columns.tolist()
        ['a:word_count', 'a:char_len', ..., 'diff:lex_score', 'cosine']
    """
    if not pairs:
        return pd.DataFrame()
    names = list(pairs[0].f_a)
    data = {
        f"{prefix}:{name}": [getattr(pair, attribute)[name] for pair in pairs]
        for prefix, attribute in PAIR_SIDES
        for name in names
    }
    if pairs[0].cosine is not None:
        data["cosine"] = [pair.cosine for pair in pairs]
    return pd.DataFrame(data, dtype=float)


def _embedding_matrix(pairs: Sequence[PairFeatures], dimension: int) -> np.ndarray:
    if dimension == 0:
        return np.zeros((len(pairs), 0))
    return np.vstack([pair.emb_diff for pair in pairs])


def _check_schema(pairs: Sequence[PairFeatures], expected: str) -> None:
    for pair in pairs:
        if pair.schema_hash != expected:
            raise SchemaMismatchError(expected, pair.schema_hash)


@dataclass
class PairVectorizer:
    """
    Fitted mapping from PairFeatures to network input rows.

    Attributes:
        schema_hash: Schema the vectorizer was fitted on.
        columns: Scalar columns kept for the network, in order.
        binner: Fitted binner, or None when scalar columns enter raw.
        embedding_dim: Width of the appended embedding difference (0 when disabled).
        dropped: Columns excluded because they were constant during training.
    """

    schema_hash: str
    columns: list[str]
    binner: GaussianBinner | None
    embedding_dim: int = 0
    dropped: list[str] = field(default_factory=list)

    @classmethod
    def fit(
        cls,
        pairs: Sequence[PairFeatures],
        config: BinnerConfig | None = None,
        binning: bool = True,
    ) -> "PairVectorizer":
        """
        Fit value ranges on training pairs.

        Constant columns carry no information and would have an empty bin
        range, so they are left out with a warning.

        Raises:
            ValueError: If no pairs are given.
            SchemaMismatchError: If the pairs were built with different schemas.
        """
        if not pairs:
            raise ValueError("Cannot fit a vectorizer on zero pairs")
        schema_hash = pairs[0].schema_hash
        _check_schema(pairs, schema_hash)

        frame = pair_frame(pairs)
        constant = [name for name in frame.columns if frame[name].nunique() < 2]
        if constant:
            logger.warning(f"Excluding constant feature columns: {', '.join(constant)}")
        kept = [name for name in frame.columns if name not in constant]

        binner = GaussianBinner.fit(config or BinnerConfig(), frame[kept]) if binning else None
        emb = pairs[0].emb_diff
        return cls(
            schema_hash=schema_hash,
            columns=kept,
            binner=binner,
            embedding_dim=0 if emb is None else int(emb.shape[0]),
            dropped=constant,
        )

    @property
    def input_dim(self) -> int:
        scalar = self.binner.output_width if self.binner else len(self.columns)
        return scalar + self.embedding_dim

    def transform(self, pairs: Sequence[PairFeatures]) -> np.ndarray:
        """
        Network input matrix of shape (len(pairs), input_dim).

        Raises:
            SchemaMismatchError: If any pair was built with another schema.
        """
        _check_schema(pairs, self.schema_hash)
        if not pairs:
            return np.zeros((0, self.input_dim))
        frame = pair_frame(pairs)
        scalars = (
            self.binner.transform_columns(frame)
            if self.binner
            else frame[self.columns].to_numpy(dtype=float)
        )
        return np.hstack([scalars, _embedding_matrix(pairs, self.embedding_dim)])

    def to_dict(self) -> dict:
        return {
            "schema_hash": self.schema_hash,
            "columns": self.columns,
            "binner": self.binner.to_dict() if self.binner else None,
            "embedding_dim": self.embedding_dim,
            "dropped": self.dropped,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PairVectorizer":
        return cls(
            schema_hash=data["schema_hash"],
            columns=list(data["columns"]),
            binner=GaussianBinner.from_dict(data["binner"]) if data["binner"] else None,
            embedding_dim=data["embedding_dim"],
            dropped=list(data["dropped"]),
        )


def build_pairs(
    extractor: PhraseFeatureExtractor,
    phrase_pairs: Sequence[tuple[str, str]],
    contexts: Sequence[tuple] | None = None,
) -> list[PairFeatures]:
    """Extract PairFeatures for a list of (w_a, w_b) phrases."""
    contexts = contexts or [None] * len(phrase_pairs)
    return [
        extractor.extract_pair(a, b, context)
        for (a, b), context in zip(phrase_pairs, contexts)
    ]
