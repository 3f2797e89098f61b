"""
Feature extraction for words and phrases.

Features are organised in groups that can be switched on and off:
- surface: word count, character length, syllable count
- frequency: Google n-gram log count, Simple/normal Wikipedia frequency ratio
- lexicon: presence in the word-complexity lexicon and its score
- context: conditional n-gram log-probabilities inside a window of 2 tokens
  on each side of the target (``lm_<n>_<offset>``, ``m`` meaning minus),
  plus a flag telling whether a context was available
- embeddings: cosine similarity and difference of the two phrase vectors
  (pair level only)

Pair features hold both sides, their differences and the embedding features.
"""

import hashlib
import json
import logging
import re
import threading
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field, replace
from typing import NamedTuple, Protocol

import numpy as np
import pandas as pd

from ..errors import ResourceMissingError
from ..lexicon import Lemmatizer, WordComplexityLexicon, lookup
from ..resources import (
    EmbeddingStore,
    FrequencyTable,
    NGramLanguageModel,
    cosine,
    lm_logprob,
    log_frequency,
    phrase_embedding,
    relative_frequency,
)
from ..resources.language_model import BOS, EOS
from ..text import tokenize

__all__ = [
    "FEATURE_CONFIG",
    "FEATURE_GROUPS",
    "FEATURE_NAMES",
    "CONTEXT_NGRAMS",
    "ContextWindow",
    "FeatureSpec",
    "FeatureSchema",
    "FeatureResources",
    "PairFeatures",
    "PhraseFeatureExtractor",
    "SyllableCounter",
    "VowelGroupSyllableCounter",
    "count_syllables",
    "extract_single",
    "extract_pair",
]

logger = logging.getLogger(__name__)

WINDOW = 2
CACHE_SIZE = 200_000

# (n, offset of the first token relative to the target) for every n-gram of
# the 5-token window that contains the target
CONTEXT_NGRAMS = [
    (n, start)
    for n in range(1, 2 * WINDOW + 2)
    for start in range(-WINDOW, 1)
    if start + n - 1 >= 0 and start + n - 1 <= WINDOW
]


def _context_name(n: int, start: int) -> str:
    return f"lm_{n}_{'m' if start < 0 else ''}{abs(start)}"


FEATURE_CONFIG = {
    "surface": ["word_count", "char_len", "syllables"],
    "frequency": ["ngram_freq", "simple_ratio"],
    "lexicon": ["lex_present", "lex_score"],
    "context": [_context_name(n, s) for n, s in CONTEXT_NGRAMS] + ["had_context"],
    "embeddings": ["cosine", "emb_diff"],
}

FEATURE_GROUPS = list(FEATURE_CONFIG)

FEATURE_NAMES = [name for names in FEATURE_CONFIG.values() for name in names]
"""Every feature name, in schema order (e.g. word_count, lm_3_m1, cosine)."""

PAIR_LEVEL = {"cosine", "emb_diff"}
VECTOR_FEATURES = {"emb_diff"}


class ContextWindow(NamedTuple):
    """Up to two tokens on each side of a target."""

    left: tuple[str, ...] = ()
    right: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.left or self.right)


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    group: str
    kind: str = "scalar"
    binnable: bool = True
    enabled: bool = True
    pair_level: bool = False

    def __post_init__(self):
        if self.kind not in ("scalar", "vector"):
            raise ValueError(f"Unknown feature kind '{self.kind}'")
        if self.binnable and self.kind != "scalar":
            raise ValueError(f"Feature '{self.name}' is binnable but not scalar")


@dataclass(frozen=True)
class FeatureSchema:
    """
    Ordered feature specifications.

    The schema hash covers the ordered enabled features only, so toggling a
    group changes it while disabled entries do not.
    """

    specs: tuple[FeatureSpec, ...]

    def __post_init__(self):
        names = [spec.name for spec in self.specs]
        if len(set(names)) != len(names):
            raise ValueError("Feature names must be unique")

    @classmethod
    def default(cls, groups: Iterable[str] | None = None) -> "FeatureSchema":
        """All features, with only the given groups enabled (all groups by default)."""
        enabled = set(FEATURE_GROUPS if groups is None else groups)
        unknown = enabled - set(FEATURE_GROUPS)
        if unknown:
            raise ValueError(
                f"Unknown feature groups: {sorted(unknown)}. Known: {FEATURE_GROUPS}"
            )
        return cls(
            tuple(
                FeatureSpec(
                    name=name,
                    group=group,
                    kind="vector" if name in VECTOR_FEATURES else "scalar",
                    binnable=name not in VECTOR_FEATURES,
                    enabled=group in enabled,
                    pair_level=name in PAIR_LEVEL,
                )
                for group, names in FEATURE_CONFIG.items()
                for name in names
            )
        )

    def with_groups(self, groups: Iterable[str]) -> "FeatureSchema":
        groups = set(groups)
        return FeatureSchema(
            tuple(replace(spec, enabled=spec.group in groups) for spec in self.specs)
        )

    @property
    def enabled(self) -> list[FeatureSpec]:
        return [spec for spec in self.specs if spec.enabled]

    @property
    def groups(self) -> list[str]:
        return list(dict.fromkeys(spec.group for spec in self.enabled))

    @property
    def single_names(self) -> list[str]:
        """Enabled per-phrase scalar features."""
        return [spec.name for spec in self.enabled if not spec.pair_level]

    def is_enabled(self, name: str) -> bool:
        return any(spec.name == name for spec in self.enabled)

    @property
    def hash(self) -> str:
        payload = [
            [spec.name, spec.group, spec.kind, spec.binnable, spec.pair_level]
            for spec in self.enabled
        ]
        return hashlib.sha256(json.dumps(payload).encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {"specs": [asdict(spec) for spec in self.specs]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "FeatureSchema":
        return cls(tuple(FeatureSpec(**spec) for spec in data["specs"]))


class SyllableCounter(Protocol):
    def count(self, word: str) -> int: ...


_VOWELS = set("aeiouy")


class VowelGroupSyllableCounter:
    """
    Counts groups of consecutive vowels (``y`` included), then corrects for a
    silent final ``e`` and a silent ``-ed`` ending. Words listed in
    ``exceptions`` use the listed count.
    """

    DEFAULT_EXCEPTIONS = {
        "people": 2,
        "business": 2,
        "area": 3,
        "idea": 3,
        "being": 2,
        "science": 2,
        "quiet": 2,
        "poem": 2,
    }

    def __init__(self, exceptions: Mapping[str, int] | None = None):
        self.exceptions = dict(
            self.DEFAULT_EXCEPTIONS if exceptions is None else exceptions
        )

    def count(self, word: str) -> int:
        word = re.sub(r"[^a-z]", "", word.lower())
        if not word:
            return 0
        if word in self.exceptions:
            return self.exceptions[word]

        groups = 0
        previous_vowel = False
        for ch in word:
            is_vowel = ch in _VOWELS
            if is_vowel and not previous_vowel:
                groups += 1
            previous_vowel = is_vowel

        if groups > 1:
            if word.endswith("e") and not word.endswith(("le", "ee", "ye")):
                groups -= 1
            elif word.endswith("le") and len(word) > 2 and word[-3] in _VOWELS:
                groups -= 1
            elif word.endswith("ed") and len(word) > 3 and word[-3] not in "tdaeiouy":
                groups -= 1
        return max(1, groups)


_DEFAULT_COUNTER = VowelGroupSyllableCounter()


def count_syllables(word: str, counter: SyllableCounter | None = None) -> int:
    """
    Number of syllables of a word (summed over tokens for a phrase).

    Example:
        >>> count_syllables("educational")
        5
    """
    counter = counter or _DEFAULT_COUNTER
    tokens = tokenize(word) or [word]
    return sum(counter.count(token) for token in tokens)


@dataclass
class FeatureResources:
    """
    Resources consulted by the feature groups. A resource may be None as long
    as no enabled group needs it.
    """

    lexicon: WordComplexityLexicon | None = None
    lm: NGramLanguageModel | None = None
    ngram_counts: FrequencyTable | None = None
    simple_counts: FrequencyTable | None = None
    normal_counts: FrequencyTable | None = None
    embeddings: EmbeddingStore | None = None
    lemmatizer: Lemmatizer | None = None
    syllable_counter: SyllableCounter | None = None

    REQUIRED = {
        "frequency": ["ngram_counts", "simple_counts", "normal_counts"],
        "lexicon": ["lexicon"],
        "context": ["lm"],
        "embeddings": ["embeddings"],
    }

    def check(self, schema: FeatureSchema) -> None:
        """
        Raises:
            ResourceMissingError: Naming the first missing resource of an enabled group.
        """
        for group in schema.groups:
            for attribute in self.REQUIRED.get(group, []):
                if getattr(self, attribute) is None:
                    raise ResourceMissingError(attribute, needed_by=group)


@dataclass
class PairFeatures:
    """
    Features of an ordered pair (w_a, w_b).

    Attributes:
        f_a: Scalar features of w_a.
        f_b: Scalar features of w_b (same keys as f_a).
        diffs: f_a[k] - f_b[k] for every key (computed).
        cosine: Cosine of the phrase embeddings, None when embeddings are disabled.
        emb_diff: Embedding of w_a minus embedding of w_b, None when disabled.
        schema_hash: Hash of the schema the features were built with.
    """

    f_a: dict[str, float]
    f_b: dict[str, float]
    schema_hash: str
    cosine: float | None = None
    emb_diff: np.ndarray | None = None
    diffs: dict[str, float] = field(init=False)

    def __post_init__(self):
        if self.f_a.keys() != self.f_b.keys():
            raise ValueError("Both sides of a pair must have the same feature names")
        self.diffs = {name: self.f_a[name] - self.f_b[name] for name in self.f_a}

    def swapped(self) -> "PairFeatures":
        return PairFeatures(
            f_a=self.f_b,
            f_b=self.f_a,
            schema_hash=self.schema_hash,
            cosine=self.cosine,
            emb_diff=None if self.emb_diff is None else -self.emb_diff,
        )


class PhraseFeatureExtractor:
    """
    Compute single and pair features under a schema.

    Args:
        resources: Lexicon, language model, count tables and embeddings.
        schema: Enabled feature groups (all groups by default).

    Raises:
        ResourceMissingError: If an enabled group lacks its resource.

    Example:
        >>> extractor = PhraseFeatureExtractor(resources, FeatureSchema.default(["surface", "lexicon"]))
        >>> extractor.extract_single("watch")["lex_score"]
        1.0
    """

    def __init__(self, resources: FeatureResources, schema: FeatureSchema | None = None):
        self.schema = schema or FeatureSchema.default()
        self.resources = resources
        resources.check(self.schema)
        self._groups = set(self.schema.groups)
        self._cache: dict[tuple[str, ContextWindow], dict[str, float]] = {}
        self._cache_lock = threading.Lock()

    def extract_single(
        self, phrase: str, context: ContextWindow | None = None
    ) -> dict[str, float]:
        """
        Scalar features of one word or phrase, in schema order.

        Raises:
            ValueError: If the phrase is empty.
        """
        tokens = tokenize(phrase)
        if not tokens:
            raise ValueError(f"Cannot extract features of an empty phrase '{phrase}'")
        context = context or ContextWindow()
        key = (phrase, context)
        cached = self._cache.get(key)
        if cached is not None:
            return dict(cached)

        values: dict[str, float] = {}
        if "surface" in self._groups:
            values.update(self._surface(tokens))
        if "frequency" in self._groups:
            values.update(self._frequency(tokens))
        if "lexicon" in self._groups:
            present, score = lookup(self.resources.lexicon, phrase, self.resources.lemmatizer)
            values["lex_present"] = float(present)
            values["lex_score"] = score
        if "context" in self._groups:
            values.update(self._context(tokens, context))

        features = {name: float(values[name]) for name in self.schema.single_names}
        with self._cache_lock:
            if len(self._cache) >= CACHE_SIZE:
                self._cache.clear()
            self._cache[key] = features
        return dict(features)

    def extract_pair(
        self,
        phrase_a: str,
        phrase_b: str,
        contexts: tuple[ContextWindow | None, ContextWindow | None] | None = None,
    ) -> PairFeatures:
        context_a, context_b = contexts or (None, None)
        f_a = self.extract_single(phrase_a, context_a)
        f_b = self.extract_single(phrase_b, context_b)

        pair_cosine = None
        emb_diff = None
        if "embeddings" in self._groups:
            vec_a = phrase_embedding(self.resources.embeddings, phrase_a).vector
            vec_b = phrase_embedding(self.resources.embeddings, phrase_b).vector
            pair_cosine = cosine(vec_a, vec_b)
            emb_diff = vec_a - vec_b
        return PairFeatures(f_a, f_b, self.schema.hash, pair_cosine, emb_diff)

    def compute_frame(
        self, phrases: Sequence[str], contexts: Sequence[ContextWindow | None] | None = None
    ) -> pd.DataFrame:
        """One row of scalar features per phrase, indexed by phrase."""
        contexts = contexts or [None] * len(phrases)
        rows = [self.extract_single(p, c) for p, c in zip(phrases, contexts)]
        return pd.DataFrame(rows, index=pd.Index(list(phrases)), columns=self.schema.single_names)

    def _surface(self, tokens: list[str]) -> dict[str, float]:
        counter = self.resources.syllable_counter
        return {
            "word_count": len(tokens),
            "char_len": len(" ".join(tokens)),
            "syllables": sum(count_syllables(t, counter) for t in tokens),
        }

    def _frequency(self, tokens: list[str]) -> dict[str, float]:
        joined = " ".join(tokens)
        r = self.resources
        return {
            "ngram_freq": log_frequency(r.ngram_counts, joined),
            "simple_ratio": relative_frequency(r.simple_counts, r.normal_counts, joined),
        }

    def _context(self, tokens: list[str], context: ContextWindow) -> dict[str, float]:
        lm = self.resources.lm
        names = FEATURE_CONFIG["context"][:-1]
        if not context:
            # Context-free: every window feature takes the mean log-prob of the phrase's n-grams
            average = float(
                np.mean(
                    [
                        lm_logprob(lm, tokens[i : i + n])
                        for n in range(1, min(lm.order, len(tokens)) + 1)
                        for i in range(len(tokens) - n + 1)
                    ]
                )
            )
            return {**dict.fromkeys(names, average), "had_context": 0.0}

        per_token = []
        for i, token in enumerate(tokens):
            left = (list(context.left) + tokens[:i])[-WINDOW:]
            right = (tokens[i + 1 :] + list(context.right))[:WINDOW]
            window = [BOS] * (WINDOW - len(left)) + left + [token] + right
            window += [EOS] * (2 * WINDOW + 1 - len(window))
            per_token.append(
                [
                    lm_logprob(lm, window[WINDOW + start : WINDOW + start + n][-lm.order :])
                    for n, start in CONTEXT_NGRAMS
                ]
            )
        means = np.mean(per_token, axis=0)
        return {**dict(zip(names, means.tolist())), "had_context": 1.0}


def extract_single(
    phrase: str,
    resources: FeatureResources,
    context: ContextWindow | None = None,
    schema: FeatureSchema | None = None,
) -> dict[str, float]:
    """Functional form of PhraseFeatureExtractor.extract_single."""
    return PhraseFeatureExtractor(resources, schema).extract_single(phrase, context)


def extract_pair(
    phrase_a: str,
    phrase_b: str,
    resources: FeatureResources,
    contexts: tuple[ContextWindow | None, ContextWindow | None] | None = None,
    schema: FeatureSchema | None = None,
) -> PairFeatures:
    """Functional form of PhraseFeatureExtractor.extract_pair."""
    return PhraseFeatureExtractor(resources, schema).extract_pair(phrase_a, phrase_b, contexts)
