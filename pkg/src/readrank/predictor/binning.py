"""
Gaussian feature binning.

Each scalar feature's training range [f_min, f_max] is split evenly into k
bins. A Gaussian sits at the center of every bin, with a standard deviation
of a fraction gamma of the bin width. A value is projected onto the k
Gaussian responses, which are then divided by their sum so the output lies
on the probability simplex.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..errors import BinningError

__all__ = ["BinnerConfig", "BinParameters", "GaussianBinner"]

logger = logging.getLogger(__name__)

SIGMA_FLOOR = 1e-12


@dataclass(frozen=True)
class BinnerConfig:
    k: int = 10
    gamma: float = 0.2

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")


@dataclass(frozen=True)
class BinParameters:
    """Fitted range, bin centers and shared sigma of one feature."""

    f_min: float
    f_max: float
    centers: np.ndarray
    sigma: float

    @classmethod
    def from_range(cls, f_min: float, f_max: float, config: BinnerConfig) -> "BinParameters":
        width = (f_max - f_min) / config.k
        centers = f_min + (np.arange(1, config.k + 1) - 0.5) * width
        sigma = config.gamma * width
        if sigma < SIGMA_FLOOR:
            logger.warning(f"Bin sigma {sigma:.3g} underflows; using {SIGMA_FLOOR}")
            sigma = SIGMA_FLOOR
        return cls(float(f_min), float(f_max), centers, float(sigma))

    def project(self, values: np.ndarray) -> np.ndarray:
        """Normalized Gaussian responses, shape (len(values), k)."""
        values = np.asarray(values, dtype=float).reshape(-1, 1)
        log_response = -((values - self.centers) ** 2) / (2 * self.sigma**2)
        # Shift by the row maximum so far out-of-range values do not underflow to 0/0
        log_response -= log_response.max(axis=1, keepdims=True)
        response = np.exp(log_response)
        return response / response.sum(axis=1, keepdims=True)


class GaussianBinner:
    """
    Per-feature Gaussian binning fitted on training columns.

    Args:
        config: Number of bins and sigma fraction.
        parameters: Fitted parameters per feature name, in column order.

    Example:
        >>> binner = GaussianBinner.fit(BinnerConfig(k=10, gamma=0.2), {"x": [0.0, 10.0]})
        >>> binner.parameters["x"].sigma
        0.2
    """

    def __init__(self, config: BinnerConfig, parameters: Mapping[str, BinParameters]):
        self.config = config
        self.parameters = dict(parameters)

    @classmethod
    def fit(
        cls, config: BinnerConfig, columns: Mapping[str, Sequence[float]]
    ) -> "GaussianBinner":
        """
        Fit the value range of every column.

        Raises:
            BinningError: If a column is empty, not finite or constant.
        """
        parameters = {}
        for name, column in columns.items():
            values = np.asarray(column, dtype=float)
            if values.size == 0:
                raise BinningError(name, "no training values")
            if not np.all(np.isfinite(values)):
                raise BinningError(name, "non-finite training values")
            f_min, f_max = float(values.min()), float(values.max())
            if f_max <= f_min:
                raise BinningError(name, f"constant column (every value is {f_min:g})")
            parameters[name] = BinParameters.from_range(f_min, f_max, config)
        logger.debug(f"Fitted Gaussian bins for {len(parameters)} features")
        return cls(config, parameters)

    @property
    def feature_names(self) -> list[str]:
        return list(self.parameters)

    @property
    def output_width(self) -> int:
        return len(self.parameters) * self.config.k

    def _params(self, feature: str) -> BinParameters:
        try:
            return self.parameters[feature]
        except KeyError:
            raise BinningError(feature, "binner was not fitted for it") from None

    def transform(self, feature: str, value: float) -> np.ndarray:
        """k-dimensional soft bin membership of a single value."""
        return self._params(feature).project(np.array([value]))[0]

    def transform_columns(self, frame: pd.DataFrame) -> np.ndarray:
        """
        Bin every fitted feature and concatenate, in fitted order.

        Returns:
            Matrix of shape (len(frame), n_features * k).
        """
        blocks = [self._params(name).project(frame[name]) for name in self.parameters]
        if not blocks:
            return np.zeros((len(frame), 0))
        return np.hstack(blocks)

    def to_dict(self) -> dict:
        return {
            "k": self.config.k,
            "gamma": self.config.gamma,
            "features": [
                {"name": name, "f_min": p.f_min, "f_max": p.f_max}
                for name, p in self.parameters.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "GaussianBinner":
        config = BinnerConfig(k=data["k"], gamma=data["gamma"])
        features: Iterable[Mapping] = data["features"]
        return cls(
            config,
            {
                f["name"]: BinParameters.from_range(f["f_min"], f["f_max"], config)
                for f in features
            },
        )
