"""
Lemmatizers used as the lexicon's back-off when a word is not rated.

Any object with a ``lemmatize(word) -> str`` method can be injected. The
default ``SuffixLemmatizer`` needs nothing beyond the standard library; the
WordNet adapter requires the optional ``nltk`` extra.
"""

import logging
from typing import Protocol, runtime_checkable

logger = logging.getLogger(__name__)

_VOWELS = set("aeiou")
_NO_UNDOUBLE = set("lsz")


@runtime_checkable
class Lemmatizer(Protocol):
    def lemmatize(self, word: str) -> str: ...


class SuffixLemmatizer:
    """
    Rule-based fallback that strips common English inflections.

    Handles plural ``-s``/``-es``/``-ies`` and verbal ``-ed``/``-ing``,
    undoubling final consonants (``running`` -> ``run``) and restoring a
    silent ``e`` on short consonant-vowel-consonant stems (``making`` -> ``make``).

    Example:
        >>> SuffixLemmatizer().lemmatize("cities")
        'city'
    """

    def __init__(self, min_stem: int = 2):
        self.min_stem = min_stem

    def lemmatize(self, word: str) -> str:
        lower = word.lower()
        for strip in (self._strip_plural, self._strip_verbal):
            lemma = strip(lower)
            if lemma is not None and len(lemma) >= self.min_stem:
                return lemma
        return lower

    @staticmethod
    def _strip_plural(word: str) -> str | None:
        if word.endswith("ies") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith(("sses", "shes", "ches", "xes", "zes")):
            return word[:-2]
        if word.endswith("s") and not word.endswith(("ss", "us", "is")):
            return word[:-1]
        return None

    def _strip_verbal(self, word: str) -> str | None:
        if word.endswith("ied") and len(word) > 4:
            return word[:-3] + "y"
        for suffix in ("ing", "ed"):
            stem = word[: -len(suffix)]
            if (
                word.endswith(suffix)
                and len(stem) >= self.min_stem
                and any(char in _VOWELS for char in stem)
            ):
                return self._repair_stem(stem)
        return None

    @staticmethod
    def _repair_stem(stem: str) -> str:
        if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
            if stem[-1] not in _NO_UNDOUBLE:
                return stem[:-1]
        if (
            len(stem) == 3
            and stem[0] not in _VOWELS
            and stem[1] in _VOWELS
            and stem[2] not in _VOWELS | set("wxy")
        ):
            return stem + "e"
        return stem


class WordNetLemmatizerAdapter:
    """
    Lemmatizer backed by NLTK's WordNet (``pip install readrank[wordnet]``).

    Tries noun, verb then adjective readings and returns the first lemma that
    differs from the input.
    """

    def __init__(self):
        try:
            from nltk.stem import WordNetLemmatizer
        except ImportError as err:
            raise ImportError(
                "The WordNet lemmatizer needs the optional 'nltk' dependency "
                "(pip install readrank[wordnet])."
            ) from err
        self._lemmatizer = WordNetLemmatizer()

    def lemmatize(self, word: str) -> str:
        lower = word.lower()
        for pos in ("n", "v", "a"):
            lemma = self._lemmatizer.lemmatize(lower, pos=pos)
            if lemma != lower:
                return lemma
        return lower
