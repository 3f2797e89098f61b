"""
Neural readability ranker: training, prediction and the model file.

A model bundles the feature schema, the fitted pair vectorizer (Gaussian
binner included), the network weights and the training configuration. The
network output for a pair (w_a, w_b) is negative when w_a is simpler.
"""

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..containers import read_container, write_container
from ..errors import ModelFileError, SchemaMismatchError
from .binning import BinnerConfig
from .core import PairVectorizer
from .features import FeatureSchema, PairFeatures
from .network import FeedForwardNet, TrainConfig, train_network

__all__ = [
    "NRRModel",
    "Predictor",
    "NRRPredictor",
    "train_nrr",
    "save_model",
    "load_model",
]

logger = logging.getLogger(__name__)

MODEL_MAGIC = b"RRNM"
MODEL_VERSION = 1
_DTYPE = np.dtype("<f8")


@dataclass
class NRRModel:
    """
    Trained ranker.

    Attributes:
        schema: Feature schema the inputs must follow.
        vectorizer: Fitted pair vectorizer.
        net: Network weights.
        config: Training configuration snapshot (seed included).
        task: Task the model was trained for (rank or ppdb).
        losses: Per-epoch training loss.
    """

    schema: FeatureSchema
    vectorizer: PairVectorizer
    net: FeedForwardNet
    config: TrainConfig
    task: str = "rank"
    losses: list[float] = field(default_factory=list)

    def predict(self, pairs: Sequence[PairFeatures]) -> np.ndarray:
        """
        Eval-mode scores, one per pair.

        Raises:
            SchemaMismatchError: If a pair was built with another schema.
        """
        if not pairs:
            return np.zeros(0)
        return self.net.predict(self.vectorizer.transform(pairs))

    def predict_pair(self, pair: PairFeatures) -> float:
        return float(self.predict([pair])[0])


def train_nrr(
    pairs: Sequence[PairFeatures],
    labels: Sequence[float],
    schema: FeatureSchema,
    config: TrainConfig | None = None,
    task: str = "rank",
    on_epoch: Callable[[int, float], None] | None = None,
) -> NRRModel:
    """
    Fit the vectorizer on the training pairs, then train the network.

    Raises:
        ValueError: If there are no pairs, labels are misaligned or no usable
            feature column is left.
        SchemaMismatchError: If the pairs were not built with ``schema``.
        TrainingDivergedError: If the loss stops being finite.
    """
    config = config or TrainConfig.for_task(task)
    if len(pairs) != len(labels):
        raise ValueError(f"{len(pairs)} pairs but {len(labels)} labels")
    if not pairs:
        raise ValueError("Cannot train on an empty dataset")
    if pairs[0].schema_hash != schema.hash:
        raise SchemaMismatchError(schema.hash, pairs[0].schema_hash)

    vectorizer = PairVectorizer.fit(
        pairs, BinnerConfig(k=config.k, gamma=config.gamma), binning=config.binning
    )
    if vectorizer.input_dim == 0:
        raise ValueError("Every feature column is constant; nothing to train on")
    X = vectorizer.transform(pairs)
    logger.info(
        f"Training on {len(pairs)} pairs with {X.shape[1]} inputs "
        f"(lr={config.learning_rate}, epochs={config.epochs}, seed={config.seed})"
    )
    net, losses = train_network(X, np.asarray(labels, dtype=float), config, on_epoch)
    return NRRModel(schema, vectorizer, net, config, task, losses)


def save_model(model: NRRModel, path: str | Path) -> None:
    """Write the model container (weights as little-endian float64)."""
    header = {
        "task": model.task,
        "schema": model.schema.to_dict(),
        "vectorizer": model.vectorizer.to_dict(),
        "config": asdict(model.config),
        "dropout": model.net.dropout,
        "shapes": [list(p.shape) for p in model.net.parameters],
        "losses": model.losses,
    }
    sections = [
        np.ascontiguousarray(p, dtype=_DTYPE).tobytes() for p in model.net.parameters
    ]
    write_container(path, MODEL_MAGIC, MODEL_VERSION, header, sections)
    logger.info(f"Saved {model.task} model to {path}")


def load_model(path: str | Path) -> NRRModel:
    """
    Raises:
        ModelFileError: On a wrong magic, unsupported version or inconsistent contents.
    """
    _, header, sections = read_container(path, MODEL_MAGIC, [MODEL_VERSION])
    try:
        shapes = [tuple(shape) for shape in header["shapes"]]
        if len(shapes) != len(sections):
            raise ModelFileError(path, "weight sections do not match the layer shapes")
        params = [
            np.frombuffer(section, dtype=_DTYPE).reshape(shape).copy()
            for section, shape in zip(sections, shapes)
        ]
        net = FeedForwardNet(params[0::2], params[1::2], dropout=header["dropout"])
        schema = FeatureSchema.from_dict(header["schema"])
        vectorizer = PairVectorizer.from_dict(header["vectorizer"])
        config = TrainConfig(**header["config"])
    except (KeyError, TypeError, ValueError) as err:
        raise ModelFileError(path, f"inconsistent model contents ({err})") from err

    if vectorizer.schema_hash != schema.hash:
        raise ModelFileError(path, "vectorizer and schema disagree")
    logger.debug(f"Loaded {header['task']} model from {path}")
    return NRRModel(schema, vectorizer, net, config, header["task"], header["losses"])


class Predictor(ABC):
    """
    Abstract base class for pairwise complexity predictors.

    Subclasses load their model and score pairs; the sign convention is shared:
    a negative score means the first phrase of the pair is simpler.

    Args:
        model_path: Path to the model file.

    Attributes:
        model_path: Path to the loaded model file.
        model: The loaded model object (type depends on subclass).
    """

    def __init__(self, model_path: str | Path | None = None):
        self.model_path = model_path
        self.model = None
        self._load_model()

    @abstractmethod
    def _load_model(self):
        pass

    @property
    @abstractmethod
    def schema(self) -> FeatureSchema:
        pass

    @abstractmethod
    def predict(self, pairs: Sequence[PairFeatures]) -> np.ndarray:
        """
        Relative complexity of each pair.

        Parameters:
            pairs: Pair features built with the predictor's schema.

        Returns:
            One real score per pair.
        """
        pass


class NRRPredictor(Predictor):
    """
    Predictor backed by an NRR model file or an in-memory model.

    Args:
        model_path: Model file to load (ignored when ``model`` is given).
        model: Already trained model.

    Example:
        >>> predictor = NRRPredictor("rank.model")
        >>> predictor.predict([extractor.extract_pair("bad", "deplorable")])
        array([-1.73])
    """

    def __init__(self, model_path: str | Path | None = None, model: NRRModel | None = None):
        self._model = model
        super().__init__(model_path)

    def _load_model(self):
        if self._model is not None:
            self.model = self._model
            return
        if self.model_path is None:
            raise ModelFileError("<none>", "no model path or model given")
        self.model = load_model(self.model_path)

    @property
    def schema(self) -> FeatureSchema:
        return self.model.schema

    def predict(self, pairs: Sequence[PairFeatures]) -> np.ndarray:
        return self.model.predict(pairs)
