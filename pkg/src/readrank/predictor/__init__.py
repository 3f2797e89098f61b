from .binning import BinnerConfig, BinParameters, GaussianBinner
from .core import PairVectorizer, build_pairs, pair_frame
from .features import (
    CONTEXT_NGRAMS,
    FEATURE_CONFIG,
    FEATURE_GROUPS,
    FEATURE_NAMES,
    ContextWindow,
    FeatureResources,
    FeatureSchema,
    FeatureSpec,
    PairFeatures,
    PhraseFeatureExtractor,
    SyllableCounter,
    VowelGroupSyllableCounter,
    count_syllables,
    extract_pair,
    extract_single,
)
from .models import NRRModel, NRRPredictor, Predictor, load_model, save_model, train_nrr
from .network import (
    HIDDEN_SIZES,
    Adam,
    FeedForwardNet,
    GradientCheckResult,
    TrainConfig,
    TrainResult,
    gradient_check,
    train_network,
)

__all__ = [
    "BinnerConfig",
    "BinParameters",
    "GaussianBinner",
    "PairVectorizer",
    "build_pairs",
    "pair_frame",
    "CONTEXT_NGRAMS",
    "FEATURE_CONFIG",
    "FEATURE_GROUPS",
    "FEATURE_NAMES",
    "ContextWindow",
    "FeatureResources",
    "FeatureSchema",
    "FeatureSpec",
    "PairFeatures",
    "PhraseFeatureExtractor",
    "SyllableCounter",
    "VowelGroupSyllableCounter",
    "count_syllables",
    "extract_pair",
    "extract_single",
    "NRRModel",
    "NRRPredictor",
    "Predictor",
    "load_model",
    "save_model",
    "train_nrr",
    "HIDDEN_SIZES",
    "Adam",
    "FeedForwardNet",
    "GradientCheckResult",
    "TrainConfig",
    "TrainResult",
    "gradient_check",
    "train_network",
]
