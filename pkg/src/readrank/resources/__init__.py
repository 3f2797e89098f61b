from .embeddings import (
    EmbeddingStore,
    PhraseVector,
    cosine,
    load_embeddings,
    phrase_embedding,
    write_embedding_cache,
)
from .frequency import (
    FrequencyTable,
    load_frequency_table,
    log_frequency,
    relative_frequency,
)
from .language_model import (
    LMConfig,
    NGramLanguageModel,
    load_lm,
    lm_logprob,
    save_lm,
    score_sentence,
    train_lm,
)

__all__ = [
    "EmbeddingStore",
    "PhraseVector",
    "cosine",
    "load_embeddings",
    "phrase_embedding",
    "write_embedding_cache",
    "FrequencyTable",
    "load_frequency_table",
    "log_frequency",
    "relative_frequency",
    "LMConfig",
    "NGramLanguageModel",
    "load_lm",
    "lm_logprob",
    "save_lm",
    "score_sentence",
    "train_lm",
]
