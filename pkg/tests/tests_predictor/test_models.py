import numpy as np
import pytest

from readrank.errors import ModelFileError, SchemaMismatchError
from readrank.metrics import pearson
from readrank.predictor import (
    FeatureSchema,
    FeatureSpec,
    NRRPredictor,
    PairFeatures,
    TrainConfig,
    load_model,
    save_model,
    train_nrr,
)

WEIGHTS = np.array([1.0, 0.8, 0.6, -0.5, 0.4])
SCHEMA = FeatureSchema(tuple(FeatureSpec(f"x{i}", "synthetic") for i in range(len(WEIGHTS))))


def make_pair(features, a, b, schema_hash=SCHEMA.hash):
    f_a = {f"x{i}": float(v) for i, v in enumerate(features[a])}
    f_b = {f"x{i}": float(v) for i, v in enumerate(features[b])}
    return PairFeatures(f_a, f_b, schema_hash)


@pytest.fixture(scope="module")
def synthetic_words():
    """500 words whose latent complexity is a noisy linear function of 5 features."""
    rng = np.random.default_rng(42)
    features = rng.uniform(0.0, 1.0, size=(500, len(WEIGHTS)))
    latent = features @ WEIGHTS + rng.normal(scale=0.02, size=500)
    return features, latent


def sample_pairs(rng, words, n):
    a = rng.choice(words, size=n)
    b = rng.choice(words, size=n)
    keep = a != b
    return list(zip(a[keep], b[keep]))


@pytest.fixture(scope="module")
def small_model(synthetic_words):
    features, latent = synthetic_words
    pairs = sample_pairs(np.random.default_rng(0), np.arange(50), 200)
    return train_nrr(
        [make_pair(features, a, b) for a, b in pairs],
        [latent[a] - latent[b] for a, b in pairs],
        SCHEMA,
        TrainConfig(epochs=3, seed=5),
    )


class TestEndToEndRanking:
    def test_learns_latent_complexity(self, synthetic_words):
        features, latent = synthetic_words
        rng = np.random.default_rng(1)
        train_words, test_words = np.arange(400), np.arange(400, 500)

        train_pairs = sample_pairs(rng, train_words, 8000)
        model = train_nrr(
            [make_pair(features, a, b) for a, b in train_pairs],
            [latent[a] - latent[b] for a, b in train_pairs],
            SCHEMA,
            TrainConfig(learning_rate=0.0005, epochs=100, k=10, gamma=0.2, dropout=0.0, seed=0),
        )

        test_pairs = [(a, b) for a in test_words for b in test_words if a != b]
        scores = model.predict([make_pair(features, a, b) for a, b in test_pairs])
        truth = np.array([latent[a] - latent[b] for a, b in test_pairs])
        assert np.mean(np.sign(scores) == np.sign(truth)) >= 0.9

        # Ranking score of a word: sum of its scores against every other test word
        totals = dict.fromkeys(test_words.tolist(), 0.0)
        for (a, _), score in zip(test_pairs, scores):
            totals[int(a)] += score
        assert pearson(list(totals.values()), latent[test_words].tolist()) >= 0.9


class TestNRRModel:
    def test_losses_recorded(self, small_model):
        assert len(small_model.losses) == 3
        assert small_model.task == "rank"

    def test_schema_mismatch(self, small_model, synthetic_words):
        features, _ = synthetic_words
        foreign = make_pair(features, 0, 1, schema_hash="0" * 64)
        with pytest.raises(SchemaMismatchError):
            small_model.predict([foreign])

    def test_empty_prediction(self, small_model):
        assert small_model.predict([]).shape == (0,)

    def test_training_errors(self, synthetic_words):
        features, _ = synthetic_words
        pair = make_pair(features, 0, 1)
        with pytest.raises(ValueError):
            train_nrr([pair], [1.0, 2.0], SCHEMA)
        with pytest.raises(ValueError):
            train_nrr([], [], SCHEMA)
        with pytest.raises(SchemaMismatchError):
            train_nrr([pair], [1.0], FeatureSchema.default())

    def test_constant_features(self, synthetic_words):
        features, _ = synthetic_words
        pairs = [make_pair(features, 0, 1)] * 5
        with pytest.raises(ValueError, match="constant"):
            train_nrr(pairs, [1.0] * 5, SCHEMA, TrainConfig(epochs=1))


class TestModelFile:
    def test_round_trip(self, small_model, synthetic_words, tmp_path):
        features, _ = synthetic_words
        path = tmp_path / "rank.model"
        save_model(small_model, path)
        loaded = load_model(path)

        pairs = [make_pair(features, a, b) for a, b in [(0, 1), (7, 3), (20, 45)]]
        np.testing.assert_array_equal(loaded.predict(pairs), small_model.predict(pairs))
        assert loaded.schema.hash == SCHEMA.hash
        assert loaded.config == small_model.config
        assert loaded.losses == small_model.losses

    def test_identical_runs_give_identical_files(self, synthetic_words, tmp_path):
        features, latent = synthetic_words
        pairs = sample_pairs(np.random.default_rng(2), np.arange(30), 100)
        for name in ("one.model", "two.model"):
            model = train_nrr(
                [make_pair(features, a, b) for a, b in pairs],
                [latent[a] - latent[b] for a, b in pairs],
                SCHEMA,
                TrainConfig(epochs=2, seed=13),
            )
            save_model(model, tmp_path / name)
        assert (tmp_path / "one.model").read_bytes() == (tmp_path / "two.model").read_bytes()

    def test_not_a_model(self, tmp_path):
        path = tmp_path / "lm.bin"
        path.write_bytes(b"RRLM" + bytes(16))
        with pytest.raises(ModelFileError, match="magic"):
            load_model(path)


class TestNRRPredictor:
    def test_from_memory(self, small_model):
        predictor = NRRPredictor(model=small_model)
        assert predictor.model is small_model
        assert predictor.schema is SCHEMA

    def test_from_file(self, small_model, tmp_path):
        path = tmp_path / "rank.model"
        save_model(small_model, path)
        predictor = NRRPredictor(path)
        assert predictor.schema.hash == SCHEMA.hash

    def test_without_model(self):
        with pytest.raises(ModelFileError):
            NRRPredictor()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelFileError):
            NRRPredictor(tmp_path / "absent.model")
