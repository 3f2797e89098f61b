import numpy as np
import pytest

from readrank.predictor import FeatureResources, FeatureSchema, PhraseFeatureExtractor, Predictor


class LexiconDifferencePredictor(Predictor):
    """Scores a pair by the lexicon score of its first side minus its second."""

    def _load_model(self):
        self.model = "lexicon-difference"

    @property
    def schema(self):
        return FeatureSchema.default(["lexicon"])

    def predict(self, pairs):
        return np.array([pair.f_a["lex_score"] - pair.f_b["lex_score"] for pair in pairs])


@pytest.fixture
def lexicon_predictor():
    return LexiconDifferencePredictor()


@pytest.fixture
def lexicon_extractor(lexicon):
    return PhraseFeatureExtractor(FeatureResources(lexicon=lexicon), FeatureSchema.default(["lexicon"]))
