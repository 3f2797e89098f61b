"""Tokenization shared by the lexicon, resources and feature extraction."""

import string

_STRIP_CHARS = string.punctuation + "“”‘’«»…"


def tokenize(text: str) -> list[str]:
    """
    Split on whitespace and strip punctuation from both ends of each token.

    Surface forms (case, inner hyphens and apostrophes) are preserved; tokens
    made only of punctuation are dropped.

    Example:
        >>> tokenize("That's pretty terrible!")
        ["That's", 'pretty', 'terrible']
    """
    tokens = (token.strip(_STRIP_CHARS) for token in text.split())
    return [token for token in tokens if token]
