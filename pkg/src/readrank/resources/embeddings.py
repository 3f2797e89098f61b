"""
Word embeddings backed by gensim ``KeyedVectors``, plus phrase averaging.

Vectors are read from the word2vec text format (``word v1 ... vd`` per line,
with or without a ``count dimension`` header) or the word2vec binary format
(``.bin`` / ``.bin.gz``, e.g. GoogleNews). ``write_embedding_cache`` saves
them in gensim's native format with the matrix in a side ``.vectors.npy``
file, which ``load_embeddings`` memory-maps.
"""

import logging
import os
import pickle
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import NamedTuple

import numpy as np
from gensim import utils
from gensim.models import KeyedVectors

from ..errors import InputFormatError, ModelFileError
from ..text import tokenize

__all__ = [
    "EmbeddingStore",
    "PhraseVector",
    "load_embeddings",
    "write_embedding_cache",
    "phrase_embedding",
    "cosine",
]

logger = logging.getLogger(__name__)

# first byte of a pickle written with protocol 2 or later
_PICKLE_PROTO = b"\x80"
_BINARY_SUFFIXES = (".bin", ".bin.gz")


class EmbeddingStore:
    """
    Read-only token -> vector lookup over a ``KeyedVectors`` instance.

    Args:
        keyed_vectors: Loaded gensim vectors.
    """

    def __init__(self, keyed_vectors: KeyedVectors):
        self.keyed_vectors = keyed_vectors

    @classmethod
    def from_dict(cls, vectors: Mapping[str, Sequence[float]]) -> "EmbeddingStore":
        tokens = list(vectors)
        dimension = len(vectors[tokens[0]]) if tokens else 0
        keyed_vectors = KeyedVectors(dimension, dtype=np.float64)
        if tokens:
            keyed_vectors.add_vectors(tokens, np.asarray([vectors[t] for t in tokens], dtype=np.float64))
        return cls(keyed_vectors)

    @property
    def vectors(self) -> np.ndarray:
        return self.keyed_vectors.vectors

    @property
    def dimension(self) -> int:
        return int(self.keyed_vectors.vector_size)

    @property
    def tokens(self) -> list[str]:
        return list(self.keyed_vectors.index_to_key)

    def __len__(self) -> int:
        return len(self.keyed_vectors.index_to_key)

    def __contains__(self, token: object) -> bool:
        return token in self.keyed_vectors.key_to_index

    def get(self, token: str) -> np.ndarray | None:
        """Vector of the exact form, falling back to lowercase."""
        index = self.keyed_vectors.key_to_index
        row = index.get(token)
        if row is None and token.lower() != token:
            row = index.get(token.lower())
        return None if row is None else np.asarray(self.keyed_vectors.vectors[row], dtype=float)


class PhraseVector(NamedTuple):
    vector: np.ndarray
    covered: bool


def _has_header(path: Path) -> bool:
    with utils.open(str(path), "rb") as f:
        fields = f.readline().split()
    return len(fields) == 2 and all(field.isdigit() for field in fields)


def _load_word2vec(path: Path, binary: bool) -> EmbeddingStore:
    no_header = not binary and not _has_header(path)
    kind = "binary" if binary else "text"
    try:
        keyed_vectors = KeyedVectors.load_word2vec_format(
            str(path),
            binary=binary,
            no_header=no_header,
            datatype=np.float32 if binary else np.float64,
        )
    except (ValueError, EOFError, UnicodeDecodeError) as err:
        raise InputFormatError(f"not in the word2vec {kind} format ({err})", path) from err
    return EmbeddingStore(keyed_vectors)


def _load_native(path: Path) -> EmbeddingStore:
    try:
        keyed_vectors = KeyedVectors.load(str(path), mmap="r")
    except (OSError, EOFError, ValueError, TypeError, AttributeError, pickle.UnpicklingError) as err:
        raise ModelFileError(path, f"corrupted embedding cache ({err})") from err
    if not isinstance(keyed_vectors, KeyedVectors):
        raise ModelFileError(path, f"expected KeyedVectors, found {type(keyed_vectors).__name__}")
    return EmbeddingStore(keyed_vectors)


def load_embeddings(path: str | Path, binary: bool | None = None) -> EmbeddingStore:
    """
    Load vectors from a word2vec file or from a cache written by write_embedding_cache.

    Args:
        path: Embedding file.
        binary: Force the word2vec binary (True) or text (False) format. By
            default, files ending in ``.bin`` or ``.bin.gz`` are read as binary.

    Raises:
        InputFormatError: On a word2vec file that cannot be parsed.
        ModelFileError: On a truncated or corrupted cache.
    """
    path = Path(path)
    with open(path, "rb") as f:
        is_cache = f.read(1) == _PICKLE_PROTO
    if is_cache:
        store = _load_native(path)
    else:
        if binary is None:
            binary = path.name.lower().endswith(_BINARY_SUFFIXES)
        store = _load_word2vec(path, binary)
    logger.info(
        f"Loaded {len(store)} embeddings of dimension {store.dimension} from {path}"
        + (" (memory-mapped)" if is_cache else "")
    )
    return store


def write_embedding_cache(store: EmbeddingStore, path: str | Path) -> None:
    """
    Save the vectors in gensim's native format.

    Two files are written, ``path`` and ``path.vectors.npy``; both are moved
    into place only once complete.
    """
    path = Path(path)
    tmp_path = path.with_name(path.name + ".tmp")
    store.keyed_vectors.save(str(tmp_path), separately=["vectors"])
    os.replace(f"{tmp_path}.vectors.npy", f"{path}.vectors.npy")
    os.replace(tmp_path, path)
    logger.debug(f"Wrote embedding cache with {len(store)} vectors to {path}")


def phrase_embedding(store: EmbeddingStore, phrase: str) -> PhraseVector:
    """
    Mean vector of the in-vocabulary words of a phrase.

    When no word is covered, the zero vector is returned with ``covered=False``.

    Raises:
        ValueError: If the phrase has no tokens.
    """
    tokens = tokenize(phrase)
    if not tokens:
        raise ValueError(f"Phrase '{phrase}' has no tokens")
    found = [vector for vector in map(store.get, tokens) if vector is not None]
    if not found:
        return PhraseVector(np.zeros(store.dimension), False)
    return PhraseVector(np.mean(found, axis=0), True)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """
    Cosine similarity; 0.0 when either vector has zero norm.

    Raises:
        ValueError: If the vectors differ in dimension.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"Dimension mismatch: {u.shape} vs {v.shape}")
    norm = np.linalg.norm(u) * np.linalg.norm(v)
    if norm == 0:
        return 0.0
    return float(np.clip(np.dot(u, v) / norm, -1.0, 1.0))
