from .lexicon import (
    MAX_SCORE,
    MIN_SCORE,
    LookupResult,
    WordComplexityLexicon,
    load_lexicon,
    longest_word,
    lookup,
    save_lexicon,
)
from .lemmatizers import Lemmatizer, SuffixLemmatizer, WordNetLemmatizerAdapter
from .ratings import (
    RatingRecord,
    aggregate_ratings,
    discard_mask,
    interannotator_agreement,
    load_ratings,
    mean_agreement,
)

__all__ = [
    "MAX_SCORE",
    "MIN_SCORE",
    "LookupResult",
    "WordComplexityLexicon",
    "load_lexicon",
    "longest_word",
    "lookup",
    "save_lexicon",
    "Lemmatizer",
    "SuffixLemmatizer",
    "WordNetLemmatizerAdapter",
    "RatingRecord",
    "aggregate_ratings",
    "discard_mask",
    "interannotator_agreement",
    "load_ratings",
    "mean_agreement",
]
