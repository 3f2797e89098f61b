import importlib.metadata
import logging

from .main import (
    ResourcePaths,
    build_language_model,
    build_lexicon,
    evaluate,
    run_build_simpleppdb,
    run_classify_rules,
    run_cwi,
    run_generate,
    run_rank,
    train_model,
)
from .errors import (
    ReadRankError,
    InputFormatError,
    ResourceMissingError,
    SchemaMismatchError,
    BinningError,
    TrainingDivergedError,
    UndefinedMetricError,
    ModelFileError,
)
from .predictor import NRRModel, NRRPredictor, PhraseFeatureExtractor, TrainConfig

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = importlib.metadata.version("readrank")


__all__ = [
    "ResourcePaths",
    "build_language_model",
    "build_lexicon",
    "evaluate",
    "run_build_simpleppdb",
    "run_classify_rules",
    "run_cwi",
    "run_generate",
    "run_rank",
    "train_model",
    "NRRModel",
    "NRRPredictor",
    "PhraseFeatureExtractor",
    "TrainConfig",
    "ReadRankError",
    "InputFormatError",
    "ResourceMissingError",
    "SchemaMismatchError",
    "BinningError",
    "TrainingDivergedError",
    "UndefinedMetricError",
    "ModelFileError",
    "__version__",
]
