"""
N-gram language model with interpolated Kneser-Ney smoothing.

Sentences are padded with a single ``<s>`` and ``</s>``. The highest order
uses raw counts, lower orders use continuation counts (number of distinct
left extensions), except for n-grams starting with ``<s>`` which keep their
raw counts. The unigram level interpolates with a uniform distribution over
the vocabulary plus ``<unk>`` so every query has a finite probability.
Order-1 models fall back to add-alpha smoothing.

Probabilities are conditional: ``lm_logprob(lm, ["a", "b"])`` is
log10 P(b | a).
"""

import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from pathlib import Path

from ..containers import read_container, write_container

__all__ = [
    "BOS",
    "EOS",
    "UNK",
    "LMConfig",
    "NGramLanguageModel",
    "train_lm",
    "lm_logprob",
    "score_sentence",
    "save_lm",
    "load_lm",
]

logger = logging.getLogger(__name__)

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

LM_MAGIC = b"RRLM"
LM_VERSION = 1


@dataclass(frozen=True)
class LMConfig:
    """
    Attributes:
        order: Highest n-gram order.
        discount: Absolute Kneser-Ney discount D, 0 < D < 1.
        alpha: Additive constant for order-1 models.
        lowercase: Lowercase tokens for training and queries.
    """

    order: int = 5
    discount: float = 0.75
    alpha: float = 1.0
    lowercase: bool = True

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if not 0.0 < self.discount < 1.0:
            raise ValueError(f"discount must be in (0, 1), got {self.discount}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")


class NGramLanguageModel:
    """
    Immutable n-gram model built from raw counts.

    Args:
        counts: ``counts[n - 1]`` maps each n-gram (tuple of tokens) to its raw
            count, for n = 1..order.
        config: Smoothing configuration.

    Attributes:
        order: Highest n-gram order.
        vocabulary: Predictable tokens (``</s>`` and ``<unk>`` included, ``<s>`` excluded).
    """

    def __init__(self, counts: Sequence[dict[tuple[str, ...], int]], config: LMConfig):
        if len(counts) != config.order:
            raise ValueError(f"Expected {config.order} count tables, got {len(counts)}")
        self.config = config
        self.order = config.order
        self.counts = [dict(table) for table in counts]
        self.vocabulary = frozenset(
            {gram[0] for gram in self.counts[0] if gram[0] != BOS} | {UNK}
        )
        self._build_tables()

    def _build_tables(self) -> None:
        """Adjusted counts, history totals and history type counts per order."""
        order = self.order
        self._adjusted: list[dict[tuple[str, ...], int]] = []
        for n in range(1, order + 1):
            if n == order:
                self._adjusted.append(self.counts[n - 1])
                continue
            continuation: Counter = Counter()
            for gram in self.counts[n]:
                continuation[gram[1:]] += 1
            adjusted = {
                gram: (count if gram[0] == BOS else continuation[gram])
                for gram, count in self.counts[n - 1].items()
            }
            self._adjusted.append({g: c for g, c in adjusted.items() if c > 0})

        self._history_total: list[Counter] = []
        self._history_types: list[Counter] = []
        for n in range(1, order + 1):
            totals: Counter = Counter()
            types: Counter = Counter()
            for gram, count in self._adjusted[n - 1].items():
                if gram[-1] == BOS:
                    continue
                totals[gram[:-1]] += count
                types[gram[:-1]] += 1
            self._history_total.append(totals)
            self._history_types.append(types)

    def normalize(self, token: str) -> str:
        token = token.lower() if self.config.lowercase else token
        if token == BOS:
            return BOS
        return token if token in self.vocabulary else UNK

    def _unigram(self, word: str) -> float:
        total = self._history_total[0][()]
        vocab_size = len(self.vocabulary)
        if self.order == 1:
            count = self._adjusted[0].get((word,), 0)
            alpha = self.config.alpha
            return (count + alpha) / (total + alpha * vocab_size)
        discount = self.config.discount
        count = self._adjusted[0].get((word,), 0)
        types = self._history_types[0][()]
        return max(count - discount, 0.0) / total + discount * types / total / vocab_size

    def probability(self, word: str, history: Sequence[str] = ()) -> float:
        """Conditional probability P(word | history) of normalized tokens."""
        history = tuple(history)[-(self.order - 1) :] if self.order > 1 else ()
        prob = self._unigram(word)
        discount = self.config.discount
        for k in range(1, len(history) + 1):
            context = history[-k:]
            total = self._history_total[k].get(context)
            if not total:
                continue
            count = self._adjusted[k].get(context + (word,), 0)
            types = self._history_types[k][context]
            prob = max(count - discount, 0.0) / total + discount * types / total * prob
        return prob


def _pad(sentence: Sequence[str], order: int) -> list[str]:
    return [BOS, *sentence, EOS] if order > 1 else list(sentence)


def train_lm(
    corpus: Iterable[Sequence[str]], order: int = 5, config: LMConfig | None = None
) -> NGramLanguageModel:
    """
    Count n-grams of every order up to ``order`` over tokenized sentences.

    Args:
        corpus: Iterable of sentences, each a sequence of tokens.
        order: Highest n-gram order (ignored when ``config`` is given).
        config: Full smoothing configuration.

    Raises:
        ValueError: If the corpus holds no tokens.

    Example:
        >>> lm = train_lm([["a", "b", "a", "b"]], order=2)
        >>> round(lm_logprob(lm, ["a", "b"]), 3)
        -0.097
    """
    config = config or LMConfig(order=order)
    counts: list[Counter] = [Counter() for _ in range(config.order)]
    n_tokens = 0
    n_sentences = 0
    for sentence in corpus:
        tokens = [t.lower() if config.lowercase else t for t in sentence]
        if not tokens:
            continue
        n_sentences += 1
        n_tokens += len(tokens)
        padded = _pad(tokens, config.order)
        for n in range(1, config.order + 1):
            for i in range(len(padded) - n + 1):
                counts[n - 1][tuple(padded[i : i + n])] += 1

    if n_tokens == 0:
        raise ValueError("Cannot train a language model on an empty corpus")

    logger.info(
        f"Trained order-{config.order} LM on {n_sentences} sentences, {n_tokens} tokens"
    )
    return NGramLanguageModel([dict(table) for table in counts], config)


def lm_logprob(lm: NGramLanguageModel, ngram: Sequence[str]) -> float:
    """
    log10 probability of the last token given the preceding ones.

    Raises:
        ValueError: If ``ngram`` is empty or longer than the model order.
    """
    if not ngram:
        raise ValueError("Cannot score an empty n-gram")
    if len(ngram) > lm.order:
        raise ValueError(f"n-gram of length {len(ngram)} exceeds model order {lm.order}")
    tokens = [lm.normalize(token) for token in ngram]
    return math.log10(lm.probability(tokens[-1], tokens[:-1]))


def score_sentence(lm: NGramLanguageModel, tokens: Sequence[str]) -> float:
    """Total log10 probability of a padded sentence."""
    padded = _pad([lm.normalize(t) for t in tokens], lm.order)
    start = 1 if lm.order > 1 else 0
    total = 0.0
    for i in range(start, len(padded)):
        history = padded[max(0, i - lm.order + 1) : i]
        total += math.log10(lm.probability(padded[i], history))
    return total


def save_lm(lm: NGramLanguageModel, path: str | Path) -> None:
    """Persist raw counts; derived tables are rebuilt on load."""
    sections = []
    for table in lm.counts:
        lines = sorted(f"{' '.join(gram)}\t{count}" for gram, count in table.items())
        sections.append("\n".join(lines).encode("utf-8"))
    header = {"config": asdict(lm.config), "vocabulary_size": len(lm.vocabulary)}
    write_container(path, LM_MAGIC, LM_VERSION, header, sections)


def load_lm(path: str | Path) -> NGramLanguageModel:
    """Load a model written by save_lm."""
    _, header, sections = read_container(path, LM_MAGIC, [LM_VERSION])
    config = LMConfig(**header["config"])
    counts = []
    for section in sections:
        table = {}
        for line in section.decode("utf-8").splitlines():
            gram, count = line.rsplit("\t", 1)
            table[tuple(gram.split(" "))] = int(count)
        counts.append(table)
    lm = NGramLanguageModel(counts, config)
    logger.info(f"Loaded order-{lm.order} LM ({len(lm.vocabulary)} types) from {path}")
    return lm
