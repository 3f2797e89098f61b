"""
Complex word identification.

Two classifiers are provided:
- ``cwi_wc_only``: a single cut over word-complexity lexicon scores, learnt
  by maximising the training G-score. Words missing from the lexicon are
  predicted complex.
- ``cwi_nearest_centroid``: per-class centroids over z-scored features
  (length, number of senses, POS tag, target/sentence cosine, n-gram
  frequency, and optionally the lexicon features); the nearest centroid by
  Euclidean distance wins, ties going to simple.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
import pandas as pd
from sklearn.neighbors import NearestCentroid
from sklearn.pipeline import Pipeline, make_pipeline
from sklearn.preprocessing import StandardScaler

from ..errors import ResourceMissingError
from ..lexicon import Lemmatizer, WordComplexityLexicon, longest_word, lookup
from ..metrics import EvalReport, class_precisions, g_score
from ..resources import EmbeddingStore, FrequencyTable, cosine, log_frequency, phrase_embedding
from ..text import tokenize
from .datasets import CWIInstance

__all__ = [
    "SIMPLE",
    "COMPLEX",
    "POS_TAGS",
    "CWI_FEATURES",
    "WC_FEATURES",
    "SenseInventory",
    "CountSenseInventory",
    "WordNetSenseInventory",
    "POSTagger",
    "RuleBasedTagger",
    "NLTKTagger",
    "CWIResources",
    "cwi_feature_frame",
    "WCThresholdClassifier",
    "NearestCentroidClassifier",
    "CentroidCWIClassifier",
    "cwi_wc_only",
    "cwi_nearest_centroid",
    "evaluate_cwi",
]

logger = logging.getLogger(__name__)

SIMPLE = 0
COMPLEX = 1

POS_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "OTHER")
CWI_FEATURES = ["word_count", "char_len", "senses", "pos", "sentence_cosine", "ngram_freq"]
WC_FEATURES = ["lex_present", "lex_score"]


class SenseInventory(Protocol):
    def senses(self, phrase: str) -> int: ...


class CountSenseInventory:
    """
    Sense counts from a ``word<TAB>count`` table.

    Phrases missing from the table fall back to their longest word.
    """

    def __init__(self, table: FrequencyTable):
        self.table = table

    def senses(self, phrase: str) -> int:
        count = self.table.count(phrase.strip())
        if count == 0 and " " in phrase.strip():
            count = self.table.count(longest_word(phrase))
        return count


class WordNetSenseInventory:
    """Number of WordNet synsets (``pip install readrank[wordnet]``)."""

    def __init__(self):
        try:
            from nltk.corpus import wordnet
        except ImportError as err:
            raise ImportError(
                "The WordNet sense inventory needs the optional 'nltk' dependency "
                "(pip install readrank[wordnet])."
            ) from err
        self._wordnet = wordnet

    def senses(self, phrase: str) -> int:
        lemma = "_".join(tokenize(phrase.lower()))
        count = len(self._wordnet.synsets(lemma))
        if count == 0 and "_" in lemma:
            count = len(self._wordnet.synsets(longest_word(phrase).lower()))
        return count


class POSTagger(Protocol):
    def tag(self, tokens: Sequence[str]) -> list[str]:
        """One tag of POS_TAGS per token."""
        ...


class RuleBasedTagger:
    """
    Closed-class word list plus suffix rules; unknown open-class words are
    tagged as nouns.
    """

    CLOSED_CLASS = frozenset(
        "a an the this that these those and or but nor so yet if of in on at to for "
        "from by with without about into over under after before between through "
        "i you he she it we they me him her us them my your his its our their "
        "is are was were be been being am do does did have has had will would "
        "can could shall should may might must not no".split()
    )
    SUFFIXES = (
        ("ly", "ADV"),
        ("ing", "VERB"),
        ("ed", "VERB"),
        ("ize", "VERB"),
        ("ise", "VERB"),
        ("ate", "VERB"),
        ("ify", "VERB"),
        ("ous", "ADJ"),
        ("ful", "ADJ"),
        ("ive", "ADJ"),
        ("able", "ADJ"),
        ("ible", "ADJ"),
        ("less", "ADJ"),
        ("ish", "ADJ"),
        ("ic", "ADJ"),
        ("al", "ADJ"),
    )

    def tag(self, tokens: Sequence[str]) -> list[str]:
        return [self._tag_one(token) for token in tokens]

    def _tag_one(self, token: str) -> str:
        word = token.lower()
        if word in self.CLOSED_CLASS or not word.isalpha():
            return "OTHER"
        for suffix, tag in self.SUFFIXES:
            if word.endswith(suffix) and len(word) > len(suffix) + 2:
                return tag
        return "NOUN"


class NLTKTagger:
    """NLTK's perceptron tagger mapped to POS_TAGS."""

    _UNIVERSAL = {"NOUN": "NOUN", "PROPN": "NOUN", "VERB": "VERB", "ADJ": "ADJ", "ADV": "ADV"}

    def __init__(self):
        try:
            import nltk
        except ImportError as err:
            raise ImportError(
                "The NLTK tagger needs the optional 'nltk' dependency "
                "(pip install readrank[wordnet])."
            ) from err
        self._nltk = nltk

    def tag(self, tokens: Sequence[str]) -> list[str]:
        tagged = self._nltk.pos_tag(list(tokens), tagset="universal")
        return [self._UNIVERSAL.get(tag, "OTHER") for _, tag in tagged]


@dataclass
class CWIResources:
    """Resources for the nearest-centroid features; None where not needed."""

    lexicon: WordComplexityLexicon | None = None
    ngram_counts: FrequencyTable | None = None
    embeddings: EmbeddingStore | None = None
    senses: SenseInventory | None = None
    tagger: POSTagger = field(default_factory=RuleBasedTagger)
    lemmatizer: Lemmatizer | None = None

    REQUIRED = {
        "senses": "senses",
        "sentence_cosine": "embeddings",
        "ngram_freq": "ngram_counts",
        "lex_present": "lexicon",
        "lex_score": "lexicon",
    }

    def check(self, features: Sequence[str]) -> None:
        """
        Raises:
            ResourceMissingError: If a requested feature lacks its resource.
        """
        for name in features:
            attribute = self.REQUIRED.get(name)
            if attribute is not None and getattr(self, attribute) is None:
                raise ResourceMissingError(attribute, needed_by=name)


def _target_tag(instance: CWIInstance, tagger: POSTagger) -> str:
    tokens = instance.sentence.split()
    target_tokens = instance.target.split() or [instance.target]
    if instance.start is not None:
        position = len(instance.sentence[: instance.start].split())
    elif target_tokens[0] in tokens:
        position = tokens.index(target_tokens[0])
    else:
        return tagger.tag(target_tokens)[-1]
    # head of a phrase is taken to be its last token
    head = min(position + len(target_tokens) - 1, len(tokens) - 1)
    return tagger.tag(tokens)[head] if tokens else "OTHER"


def cwi_feature_frame(
    instances: Sequence[CWIInstance],
    resources: CWIResources,
    features: Sequence[str] = CWI_FEATURES,
) -> pd.DataFrame:
    """
    Numeric feature table, one row per instance. ``pos`` expands to one
    indicator column per tag of POS_TAGS.

    Raises:
        ResourceMissingError: If a requested feature lacks its resource.
        ValueError: On an unknown feature name.
    """
    unknown = set(features) - set(CWI_FEATURES) - set(WC_FEATURES)
    if unknown:
        raise ValueError(f"Unknown CWI features: {sorted(unknown)}")
    resources.check(features)

    rows = []
    for instance in instances:
        tokens = tokenize(instance.target) or [instance.target]
        row: dict[str, float] = {}
        for name in features:
            match name:
                case "word_count":
                    row[name] = len(tokens)
                case "char_len":
                    row[name] = len(instance.target)
                case "senses":
                    row[name] = resources.senses.senses(instance.target)
                case "pos":
                    tag = _target_tag(instance, resources.tagger)
                    row.update({f"pos_{t}": float(t == tag) for t in POS_TAGS})
                case "sentence_cosine":
                    row[name] = cosine(
                        phrase_embedding(resources.embeddings, instance.target).vector,
                        phrase_embedding(resources.embeddings, instance.sentence).vector,
                    )
                case "ngram_freq":
                    row[name] = log_frequency(resources.ngram_counts, " ".join(tokens))
                case "lex_present" | "lex_score":
                    present, score = lookup(resources.lexicon, instance.target, resources.lemmatizer)
                    row["lex_present"], row["lex_score"] = float(present), score
        rows.append(row)

    columns = [
        column
        for name in features
        for column in ([f"pos_{t}" for t in POS_TAGS] if name == "pos" else [name])
    ]
    return pd.DataFrame(rows, columns=columns, dtype=float)


def _labels(instances: Sequence[CWIInstance]) -> np.ndarray:
    return np.asarray([instance.label for instance in instances], dtype=int)


def _training_g_score(predicted: np.ndarray, gold: np.ndarray) -> float:
    accuracy = float(np.mean(predicted == gold))
    positives = gold == COMPLEX
    recall = float(np.mean(predicted[positives] == COMPLEX)) if positives.any() else 0.0
    return g_score(accuracy, recall)


@dataclass
class WCThresholdClassifier:
    """
    Predicts complex when the lexicon score is >= ``threshold``, or when the
    word is not in the lexicon.
    """

    lexicon: WordComplexityLexicon
    threshold: float
    lemmatizer: Lemmatizer | None = None

    def score(self, instance: CWIInstance) -> float | None:
        present, score = lookup(self.lexicon, instance.target, self.lemmatizer)
        return score if present else None

    def predict(self, instances: Sequence[CWIInstance]) -> list[int]:
        predictions = []
        for instance in instances:
            score = self.score(instance)
            predictions.append(COMPLEX if score is None or score >= self.threshold else SIMPLE)
        return predictions

    @staticmethod
    def sweep(scores: Sequence[float], labels: Sequence[int]) -> float:
        """
        Threshold maximising the G-score of ``score >= t`` against ``labels``.

        Candidates are -inf, the midpoints between consecutive distinct
        scores and +inf, tried in increasing order; the first maximum wins.
        """
        values = np.asarray(scores, dtype=float)
        gold = np.asarray(labels, dtype=int)
        distinct = np.unique(values)
        candidates = [-math.inf, *((distinct[:-1] + distinct[1:]) / 2).tolist(), math.inf]
        best, best_score = candidates[0], -1.0
        for t in candidates:
            current = _training_g_score(np.where(values >= t, COMPLEX, SIMPLE), gold)
            if current > best_score:
                best, best_score = t, current
        return best


def cwi_wc_only(
    train: Sequence[CWIInstance],
    lexicon: WordComplexityLexicon,
    lemmatizer: Lemmatizer | None = None,
) -> WCThresholdClassifier:
    """
    Learn a complexity-score cut on the lexicon-covered training instances.

    Raises:
        ValueError: If no training instance is covered by the lexicon.
    """
    classifier = WCThresholdClassifier(lexicon, math.inf, lemmatizer)
    covered = [(s, i.label) for i in train if (s := classifier.score(i)) is not None]
    if not covered:
        raise ValueError("No CWI training instance is covered by the lexicon")
    logger.info(f"Lexicon covers {len(covered)}/{len(train)} CWI training instances")

    scores, labels = zip(*covered)
    if len(set(labels)) == 1:
        only = labels[0]
        logger.warning(
            f"All covered training instances are {'complex' if only == COMPLEX else 'simple'}; "
            "the threshold is degenerate"
        )
        classifier.threshold = -math.inf if only == COMPLEX else math.inf
    else:
        classifier.threshold = WCThresholdClassifier.sweep(scores, labels)
    logger.info(f"WC-only threshold: {classifier.threshold}")
    return classifier


@dataclass
class NearestCentroidClassifier:
    """
    Euclidean nearest centroid over z-scored columns.

    Attributes:
        columns: Feature column names, in order.
        pipeline: Fitted ``StandardScaler`` then ``NearestCentroid``.
    """

    columns: list[str]
    pipeline: Pipeline

    @classmethod
    def fit(cls, frame: pd.DataFrame, labels: Sequence[int]) -> "NearestCentroidClassifier":
        """
        Raises:
            ValueError: If a class has no training instance.
        """
        y = np.asarray(labels, dtype=int)
        for label in (SIMPLE, COMPLEX):
            if not (y == label).any():
                raise ValueError(f"No training instance of class {label}")
        pipeline = make_pipeline(StandardScaler(), NearestCentroid())
        pipeline.fit(frame.to_numpy(dtype=float), y)
        return cls(list(frame.columns), pipeline)

    @property
    def scale(self) -> np.ndarray:
        """Training standard deviation of each column (1 where it is 0)."""
        return self.pipeline[0].scale_

    @property
    def centroids(self) -> dict[int, np.ndarray]:
        """Class label -> centroid in z-scored space."""
        model = self.pipeline[-1]
        return {int(label): centroid for label, centroid in zip(model.classes_, model.centroids_)}

    def predict_frame(self, frame: pd.DataFrame) -> list[int]:
        # classes_ is sorted, so an exact tie resolves to SIMPLE
        return self.pipeline.predict(frame[self.columns].to_numpy(dtype=float)).astype(int).tolist()


@dataclass
class CentroidCWIClassifier:
    """Nearest-centroid classifier bound to its feature extraction."""

    resources: CWIResources
    features: list[str]
    model: NearestCentroidClassifier

    def predict(self, instances: Sequence[CWIInstance]) -> list[int]:
        return self.model.predict_frame(
            cwi_feature_frame(instances, self.resources, self.features)
        )


def cwi_nearest_centroid(
    train: Sequence[CWIInstance],
    resources: CWIResources,
    features: Sequence[str] = CWI_FEATURES,
    with_wc: bool = False,
) -> CentroidCWIClassifier:
    """
    Raises:
        ResourceMissingError: If a feature lacks its resource.
        ValueError: If a class has no training instance.
    """
    names = list(features) + [name for name in WC_FEATURES if with_wc and name not in features]
    frame = cwi_feature_frame(train, resources, names)
    model = NearestCentroidClassifier.fit(frame, _labels(train))
    logger.info(f"Nearest centroid trained on {len(train)} instances with {len(frame.columns)} columns")
    return CentroidCWIClassifier(resources, names, model)


def evaluate_cwi(predictions: Sequence[int], instances: Sequence[CWIInstance]) -> EvalReport:
    """Accuracy, complex-class precision, recall and F1, and the G-score."""
    report = class_precisions(
        list(predictions), _labels(instances).tolist(), classes=[SIMPLE, COMPLEX], positive=COMPLEX
    )
    return EvalReport(
        task="cwi",
        metrics={
            "accuracy": report.accuracy,
            "precision": report.precision[COMPLEX],
            "recall": report.recall,
            "f_score": report.f_score,
            "g_score": report.g_score,
        },
        n=report.n,
    )
