import numpy as np
import pytest

from readrank.predictor import FeatureResources, FeatureSchema, PhraseFeatureExtractor, TrainConfig
from readrank.tasks import (
    ParaphraseRule,
    RuleClass,
    RuleThresholds,
    classify_rule,
    classify_score,
    cross_validate_rules,
    generate_substitutions,
    read_labelled_rules,
    rule_training_set,
    score_rules,
    select_symmetric_threshold,
    vocabulary_disjoint_folds,
)


@pytest.fixture
def labelled_rules(data_dir):
    return read_labelled_rules(data_dir / "labelled_rules.tsv")


@pytest.fixture
def scored_rules():
    return [
        ParaphraseRule("[JJ]", "big", "large", quality=3.4, yhat=0.9),
        ParaphraseRule("[JJ]", "big", "huge", quality=3.5, yhat=0.2),
        ParaphraseRule("[JJ]", "big", "very large", quality=3.9, yhat=0.8),
        ParaphraseRule("[JJ]", "big", "quite large", quality=4.2, yhat=0.6),
        ParaphraseRule("[JJ]", "big", "colossal", quality=3.8, yhat=-0.9),
        ParaphraseRule("[NN]", "big", "great", quality=4.0, yhat=0.5),
        ParaphraseRule("[JJ]", "Big", "huge", quality=3.6, yhat=0.45),
        ParaphraseRule("[JJ]", "big", "big", quality=5.0, yhat=0.0),
        ParaphraseRule("[JJ]", "large", "big", quality=5.0, yhat=0.3),
    ]


class TestThreeWayClassification:
    def test_boundaries(self):
        scores = [-1.0, -0.401, -0.4, 0.0, 0.4, 0.401, 1.0]
        expected = [
            RuleClass.COMPLICATING,
            RuleClass.COMPLICATING,
            RuleClass.NO_DIFFERENCE,
            RuleClass.NO_DIFFERENCE,
            RuleClass.NO_DIFFERENCE,
            RuleClass.SIMPLIFYING,
            RuleClass.SIMPLIFYING,
        ]
        assert [classify_score(s) for s in scores] == expected

    def test_custom_thresholds(self):
        assert classify_score(0.3, RuleThresholds(-0.2, 0.2)) == RuleClass.SIMPLIFYING

    def test_invalid_thresholds(self):
        with pytest.raises(ValueError):
            RuleThresholds(low=0.5, high=0.1)

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("1", RuleClass.SIMPLIFYING),
            ("+1", RuleClass.SIMPLIFYING),
            ("no-difference", RuleClass.NO_DIFFERENCE),
            ("Complicating", RuleClass.COMPLICATING),
            ("-1", RuleClass.COMPLICATING),
        ],
    )
    def test_parse_labels(self, text, expected):
        assert RuleClass.parse(text) == expected

    def test_score_rules(self, labelled_rules, lexicon_predictor, lexicon_extractor):
        scored = score_rules(lexicon_predictor, labelled_rules[:1], lexicon_extractor)
        assert scored[0].yhat == pytest.approx(3.4 - 1.1)
        assert scored[0].predicted == RuleClass.SIMPLIFYING

    def test_classify_rule(self, lexicon_predictor, lexicon_extractor):
        rule = ParaphraseRule("[JJ]", "bad", "awful")
        assert classify_rule(lexicon_predictor, rule, lexicon_extractor) == RuleClass.COMPLICATING


class TestFolds:
    def test_folds_are_vocabulary_disjoint(self, labelled_rules):
        folds = vocabulary_disjoint_folds(labelled_rules, k=2, seed=0)
        assert sorted(np.concatenate(folds).tolist()) == list(range(len(labelled_rules)))
        vocabularies = [
            {p for i in fold for p in (labelled_rules[i].source, labelled_rules[i].target)}
            for fold in folds
        ]
        assert vocabularies[0].isdisjoint(vocabularies[1])

    def test_chained_rules_stay_together(self, labelled_rules):
        """enormous-big-colossal and facilitate-help-assist are connected through shared words."""
        for fold in vocabulary_disjoint_folds(labelled_rules, k=3, seed=1):
            words = {p for i in fold for p in (labelled_rules[i].source, labelled_rules[i].target)}
            assert not ({"enormous", "colossal"} & words) or {"enormous", "colossal"} <= words

    def test_seeded(self, labelled_rules):
        first = vocabulary_disjoint_folds(labelled_rules, k=2, seed=4)
        second = vocabulary_disjoint_folds(labelled_rules, k=2, seed=4)
        assert all(np.array_equal(a, b) for a, b in zip(first, second))

    @pytest.mark.parametrize("k", [1, 5])
    def test_invalid_fold_count(self, labelled_rules, k):
        with pytest.raises(ValueError):
            vocabulary_disjoint_folds(labelled_rules, k=k)


class TestThresholdSelection:
    def test_smallest_perfect_threshold(self):
        assert select_symmetric_threshold([-0.9, -0.2, 0.1, 0.7], [-1, 0, 0, 1]) == pytest.approx(0.2)

    def test_explicit_candidates(self):
        assert select_symmetric_threshold([0.3, -0.3], [1, -1], candidates=[0.5, 0.1]) == 0.1

    def test_no_scores(self):
        with pytest.raises(ValueError):
            select_symmetric_threshold([], [])


class TestCrossValidation:
    def test_report(self, labelled_rules, lexicon):
        extractor = PhraseFeatureExtractor(
            FeatureResources(lexicon=lexicon), FeatureSchema.default(["surface", "lexicon"])
        )
        folds_seen = []
        report = cross_validate_rules(
            labelled_rules,
            extractor,
            TrainConfig.for_task("ppdb", epochs=2),
            k=2,
            on_fold=folds_seen.append,
        )
        assert folds_seen == [0, 1]
        assert report.task == "ppdb" and report.n == 6
        assert list(report.metrics) == ["accuracy", "precision[+1]", "precision[-1]", "precision[0]"]
        assert 0.0 <= report.metrics["accuracy"] <= 1.0

    def test_unlabelled_rule(self, lexicon_extractor):
        with pytest.raises(ValueError, match="no label"):
            rule_training_set([ParaphraseRule("[JJ]", "big", "large")], lexicon_extractor)


class TestGenerateSubstitutions:
    def test_quality_thresholds_and_order(self, scored_rules):
        result = generate_substitutions("big", scored_rules)
        assert [s.candidate for s in result] == ["quite large", "great", "huge", "colossal"]

    def test_best_rule_per_candidate(self, scored_rules):
        huge = next(s for s in generate_substitutions("big", scored_rules) if s.candidate == "huge")
        assert (huge.yhat, huge.quality) == (0.45, 3.6)

    def test_category_filter(self, scored_rules):
        result = generate_substitutions("big", scored_rules, category="[JJ]")
        assert [s.candidate for s in result] == ["quite large", "huge", "colossal"]

    def test_only_simplifying(self, scored_rules):
        result = generate_substitutions("BIG", scored_rules, only_simplifying=True)
        assert [s.candidate for s in result] == ["quite large", "great", "huge"]

    def test_predicted_class_takes_precedence(self):
        rule = ParaphraseRule(
            "[JJ]", "big", "large", quality=4.0, yhat=0.9, predicted=RuleClass.NO_DIFFERENCE
        )
        assert generate_substitutions("big", [rule], only_simplifying=True) == []

    def test_rule_order_does_not_matter(self, scored_rules):
        assert generate_substitutions("big", scored_rules) == generate_substitutions(
            "big", list(reversed(scored_rules))
        )

    def test_unscored_rules(self, lexicon_predictor, lexicon_extractor):
        rules = [ParaphraseRule("[JJ]", "colossal", "big", quality=3.8)]
        with pytest.raises(ValueError):
            generate_substitutions("colossal", rules)
        result = generate_substitutions(
            "colossal", rules, predictor=lexicon_predictor, extractor=lexicon_extractor
        )
        assert result[0].yhat == pytest.approx(4.4 - 1.0)

    def test_unknown_target(self, scored_rules):
        assert generate_substitutions("tiny", scored_rules) == []
