import json

import numpy as np
import pytest

from readrank.errors import UndefinedMetricError
from readrank.metrics import (
    EvalReport,
    average_precision,
    class_precisions,
    g_score,
    mean_average_precision,
    paired_bootstrap,
    pearson,
    precision_at_1,
    ranking_pearson,
    score_generated_lists,
)

GOLD = [
    {"bad": 1, "awful": 2, "deplorable": 3},
    {"big": 1, "large": 1, "enormous": 2},
    {"help": 1, "assist": 2},
]


class TestRankingMetrics:
    def test_precision_at_1(self):
        predicted = [["bad", "awful", "deplorable"], ["large", "big", "enormous"], ["assist", "help"]]
        assert precision_at_1(predicted, GOLD) == pytest.approx(2 / 3, abs=1e-12)

    def test_precision_at_1_errors(self):
        with pytest.raises(ValueError):
            precision_at_1([], [])
        with pytest.raises(ValueError):
            precision_at_1([["bad"]], GOLD)

    def test_ranking_pearson_perfect(self):
        predicted = [["bad", "awful", "deplorable"]]
        assert ranking_pearson(predicted, GOLD[:1]) == pytest.approx(1.0, abs=1e-12)

    def test_pearson_oracle(self):
        assert pearson([1, 2, 3, 4], [2, 4, 5, 9]) == pytest.approx(11 / np.sqrt(130), abs=1e-12)

    def test_pearson_zero_variance(self):
        with pytest.raises(UndefinedMetricError):
            pearson([1, 1, 1], [1, 2, 3])


class TestGenerationMetrics:
    def test_average_precision(self):
        assert average_precision([True, False, True]) == pytest.approx((1 + 2 / 3) / 2, abs=1e-12)
        assert average_precision([False, False]) == 0.0

    def test_map_excludes_empty_lists(self):
        lists = [[True, False], [False, True], []]
        assert mean_average_precision(lists) == pytest.approx(0.75, abs=1e-12)
        score = score_generated_lists(lists)
        assert (score.evaluated, score.excluded) == (2, 1)
        assert score.precision_at_1 == 0.5
        assert score.mean_length == 2.0

    def test_no_candidates_at_all(self):
        with pytest.raises(UndefinedMetricError):
            mean_average_precision([[], []])


class TestClassification:
    def test_confusion_oracle(self):
        predictions = [1, 1, 0, -1, 0, 1, -1, 0]
        golds = [1, 0, 0, -1, 1, 1, 0, 0]
        report = class_precisions(predictions, golds, classes=[-1, 0, 1], positive=1)
        assert report.accuracy == pytest.approx(5 / 8, abs=1e-12)
        assert report.precision == pytest.approx({-1: 0.5, 0: 2 / 3, 1: 2 / 3}, abs=1e-12)
        assert report.recall == pytest.approx(2 / 3, abs=1e-12)
        assert report.g_score == pytest.approx(2 * (5 / 8) * (2 / 3) / (5 / 8 + 2 / 3), abs=1e-12)

    def test_never_predicted_class(self):
        report = class_precisions([0, 0], [0, 1], classes=[0, 1], positive=1)
        assert report.precision[1] == 0.0
        assert report.undefined == {1}
        assert report.f_score == 0.0

    def test_f_score_of_positive_class(self):
        report = class_precisions([1, 1, 0, 0], [1, 0, 1, 0], classes=[0, 1], positive=1)
        assert report.f_score == pytest.approx(0.5)
        assert report.undefined == set()

    def test_prediction_outside_classes(self):
        report = class_precisions(["a", "b", "c"], ["a", "b", "b"], classes=["a", "b"], positive="b")
        assert report.accuracy == pytest.approx(2 / 3)
        assert report.precision == pytest.approx({"a": 1.0, "b": 1.0})
        assert report.recall == pytest.approx(0.5)

    def test_g_score(self):
        assert g_score(0.8, 0.5) == pytest.approx(2 * 0.8 * 0.5 / 1.3, abs=1e-12)
        assert g_score(0.0, 0.0) == 0.0
        with pytest.raises(ValueError):
            g_score(1.2, 0.5)

    def test_harmonic_below_geometric_below_arithmetic(self):
        rng = np.random.default_rng(0)
        for accuracy, recall in rng.uniform(0, 1, size=(10_000, 2)):
            harmonic = g_score(accuracy, recall)
            assert harmonic <= np.sqrt(accuracy * recall) + 1e-12
            assert np.sqrt(accuracy * recall) <= (accuracy + recall) / 2 + 1e-12


class TestPairedBootstrap:
    @staticmethod
    def accuracy(predictions, gold):
        return float(np.mean([p == g for p, g in zip(predictions, gold)]))

    def test_clearly_better_system(self):
        gold = [1] * 50
        better = [1] * 45 + [0] * 5
        worse = [1] * 20 + [0] * 30
        assert paired_bootstrap(gold, better, worse, self.accuracy, n_resamples=500, seed=1) < 0.05

    def test_identical_systems(self):
        gold = [1, 0, 1, 0]
        assert paired_bootstrap(gold, gold, gold, self.accuracy, n_resamples=100) == 0.0

    def test_seeded(self):
        gold = [1, 0, 1, 1, 0, 1]
        a, b = [1, 0, 0, 1, 0, 1], [1, 1, 0, 1, 0, 0]
        first = paired_bootstrap(gold, a, b, self.accuracy, n_resamples=200, seed=3)
        assert first == paired_bootstrap(gold, a, b, self.accuracy, n_resamples=200, seed=3)


class TestEvalReport:
    def test_text(self):
        report = EvalReport("rank", {"p_at_1": 0.5}, 4)
        lines = report.to_text().splitlines()
        assert lines[0].split() == ["METRIC", "VALUE"]
        assert lines[1].split() == ["p_at_1", "0.5000"]
        assert lines[-1].split() == ["instances", "4"]

    def test_jsonl(self):
        report = EvalReport("ppdb", {"accuracy": 0.75}, 8, per_class={"+1": {"precision": 0.5}})
        rows = [json.loads(line) for line in report.to_jsonl().splitlines()]
        assert rows == [
            {"metric": "accuracy", "n": 8, "task": "ppdb", "value": 0.75},
            {"class": "+1", "metric": "precision", "n": 8, "task": "ppdb", "value": 0.5},
        ]
