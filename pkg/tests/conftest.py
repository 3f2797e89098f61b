from pathlib import Path

import pytest

from readrank.lexicon import load_lexicon
from readrank.predictor import FeatureResources, FeatureSchema, PhraseFeatureExtractor
from readrank.resources import load_embeddings, load_frequency_table, train_lm
from readrank.text import tokenize

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(DATA / "lexicon.tsv")


@pytest.fixture(scope="session")
def corpus_lm():
    with open(DATA / "corpus.txt", encoding="utf-8") as f:
        sentences = [tokenize(line) for line in f if line.strip()]
    return train_lm(sentences, order=3)


@pytest.fixture(scope="session")
def feature_resources(lexicon, corpus_lm):
    return FeatureResources(
        lexicon=lexicon,
        lm=corpus_lm,
        ngram_counts=load_frequency_table(DATA / "ngrams.tsv"),
        simple_counts=load_frequency_table(DATA / "simplewiki.tsv"),
        normal_counts=load_frequency_table(DATA / "wiki.tsv"),
        embeddings=load_embeddings(DATA / "embeddings.txt"),
    )


@pytest.fixture
def extractor(feature_resources):
    """Extractor with every feature group enabled."""
    return PhraseFeatureExtractor(feature_resources, FeatureSchema.default())
