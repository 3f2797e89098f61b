import math

import numpy as np
import pandas as pd
import pytest

from readrank.errors import ResourceMissingError
from readrank.resources import load_embeddings, load_frequency_table
from readrank.tasks import (
    COMPLEX,
    POS_TAGS,
    SIMPLE,
    CountSenseInventory,
    CWIInstance,
    CWIResources,
    NearestCentroidClassifier,
    RuleBasedTagger,
    WCThresholdClassifier,
    cwi_feature_frame,
    cwi_nearest_centroid,
    cwi_wc_only,
    evaluate_cwi,
    read_cwi,
)


@pytest.fixture
def instances(data_dir):
    return read_cwi(data_dir / "cwi_semeval.tsv")


@pytest.fixture
def resources(data_dir, lexicon):
    return CWIResources(
        lexicon=lexicon,
        ngram_counts=load_frequency_table(data_dir / "ngrams.tsv"),
        embeddings=load_embeddings(data_dir / "embeddings.txt"),
        senses=CountSenseInventory(load_frequency_table(data_dir / "senses.tsv")),
    )


class TestThresholdSweep:
    def test_first_perfect_threshold(self):
        assert WCThresholdClassifier.sweep([0.1, 0.4, 0.35, 0.8], [0, 1, 0, 1]) == pytest.approx(0.375)

    def test_all_scores_equal(self):
        """Only the infinite candidates remain; predicting everything complex wins."""
        assert WCThresholdClassifier.sweep([2.0, 2.0], [0, 1]) == -math.inf


class TestWCOnly:
    def test_separable_fixture(self, instances, lexicon):
        classifier = cwi_wc_only(instances, lexicon)
        assert classifier.threshold == pytest.approx(2.9)
        assert classifier.predict(instances) == [i.label for i in instances]

    def test_out_of_vocabulary_is_complex(self, instances, lexicon):
        classifier = cwi_wc_only(instances, lexicon)
        unknown = CWIInstance("a quixotic plan", "quixotic", 1)
        assert classifier.predict([unknown]) == [COMPLEX]

    def test_single_class(self, lexicon, caplog):
        train = [CWIInstance("it is bad", "bad", 1), CWIInstance("a big one", "big", 1)]
        classifier = cwi_wc_only(train, lexicon)
        assert classifier.threshold == -math.inf
        assert "degenerate" in caplog.text

    def test_no_coverage(self, lexicon):
        with pytest.raises(ValueError, match="covered"):
            cwi_wc_only([CWIInstance("a quixotic plan", "quixotic", 1)], lexicon)


class TestNearestCentroid:
    def test_separated_clusters(self):
        rng = np.random.default_rng(0)
        frame = pd.DataFrame(
            np.vstack([rng.normal(0, 1, size=(20, 2)), rng.normal(10, 1, size=(20, 2))]),
            columns=["x", "y"],
        )
        labels = [SIMPLE] * 20 + [COMPLEX] * 20
        model = NearestCentroidClassifier.fit(frame, labels)
        assert model.predict_frame(frame) == labels

    def test_tie_goes_to_simple(self):
        # mean 1, scale sqrt(2): centroids at -sqrt(2)/2 and sqrt(2)/2, x = 1 sits at 0
        model = NearestCentroidClassifier.fit(pd.DataFrame({"x": [-1.0, 1.0, 1.0, 3.0]}), [0, 0, 1, 1])
        np.testing.assert_allclose(model.centroids[SIMPLE], -model.centroids[COMPLEX])
        assert model.predict_frame(pd.DataFrame({"x": [1.0, 1.5, 0.5]})) == [SIMPLE, COMPLEX, SIMPLE]

    def test_columns_are_selected_by_name(self):
        frame = pd.DataFrame({"x": [0.0, 1.0, 5.0, 6.0], "y": [9.0, 8.0, 1.0, 0.0]})
        model = NearestCentroidClassifier.fit(frame, [0, 0, 1, 1])
        assert model.predict_frame(frame[["y", "x"]]) == [0, 0, 1, 1]

    def test_constant_column(self):
        frame = pd.DataFrame({"x": [0.0, 1.0, 5.0, 6.0], "c": [3.0] * 4})
        model = NearestCentroidClassifier.fit(frame, [0, 0, 1, 1])
        assert model.scale[1] == 1.0
        assert model.predict_frame(frame) == [0, 0, 1, 1]

    def test_missing_class(self):
        with pytest.raises(ValueError):
            NearestCentroidClassifier.fit(pd.DataFrame({"x": [1.0, 2.0]}), [1, 1])

    def test_end_to_end(self, instances, resources):
        classifier = cwi_nearest_centroid(instances, resources, with_wc=True)
        assert classifier.features[-2:] == ["lex_present", "lex_score"]
        predictions = classifier.predict(instances)
        assert len(predictions) == len(instances)
        assert set(predictions) <= {SIMPLE, COMPLEX}


class TestFeatures:
    def test_columns(self, instances, resources):
        frame = cwi_feature_frame(instances, resources)
        assert list(frame.columns) == [
            "word_count",
            "char_len",
            "senses",
            *[f"pos_{tag}" for tag in POS_TAGS],
            "sentence_cosine",
            "ngram_freq",
        ]
        first = frame.iloc[0]
        assert first["senses"] == 2
        assert first["pos_ADJ"] == 1.0
        assert frame[[f"pos_{tag}" for tag in POS_TAGS]].sum(axis=1).eq(1.0).all()
        assert first["ngram_freq"] == pytest.approx(math.log10(4001))

    def test_missing_resource(self, instances):
        with pytest.raises(ResourceMissingError, match="senses"):
            cwi_feature_frame(instances, CWIResources(), ["word_count", "senses"])

    def test_unknown_feature(self, instances, resources):
        with pytest.raises(ValueError):
            cwi_feature_frame(instances, resources, ["psycholinguistic"])

    def test_phrase_senses_fall_back_to_longest_word(self, data_dir):
        inventory = CountSenseInventory(load_frequency_table(data_dir / "senses.tsv"))
        assert inventory.senses("the big house") == 12

    @pytest.mark.parametrize(
        "token, tag",
        [("the", "OTHER"), ("quickly", "ADV"), ("running", "VERB"), ("dangerous", "ADJ"), ("house", "NOUN"), ("42", "OTHER")],
    )
    def test_rule_based_tagger(self, token, tag):
        assert RuleBasedTagger().tag([token]) == [tag]


class TestEvaluation:
    def test_metrics(self, instances):
        report = evaluate_cwi([1, 0, 1, 0, 0, 0, 1, 1], instances)
        assert report.metrics == pytest.approx(
            {"accuracy": 0.75, "precision": 0.75, "recall": 0.75, "f_score": 0.75, "g_score": 0.75}
        )
        assert report.n == 8
