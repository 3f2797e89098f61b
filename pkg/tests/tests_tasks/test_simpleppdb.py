import logging

import pytest

import readrank.predictor.features as features
from readrank.tasks import RuleClass, RuleThresholds, build_simpleppdb, read_simpleppdb

WORDS = ["bad", "awful", "deplorable", "big", "large", "enormous", "colossal", "help", "assist", "facilitate"]


class Interrupted(Exception):
    pass


def write_rules(path, count):
    """
    Every 97th line is malformed, every 100th (offset 50) is a rule between
    punctuation marks and every 100th (offset 75) mixes words and punctuation.
    """
    lines = []
    for i in range(count):
        if i % 97 == 0:
            lines.append(f"broken line {i}")
        elif i % 100 == 50:
            lines.append("[,] ||| , ||| ; ||| 3.9")
        elif i % 100 == 75:
            lines.append("[NP] ||| the big house ||| a large , old house ||| 4.2")
        else:
            source, target = WORDS[i % len(WORDS)], WORDS[(i * 7 + 3) % len(WORDS)]
            lines.append(f"[JJ] ||| {source} ||| {target} ||| {3 + (i % 20) / 10:g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def rules_file(tmp_path):
    """2,500 PPDB lines: 26 malformed, 25 punctuation-only, 25 mixed."""
    return write_rules(tmp_path / "ppdb.txt", 2500)


def build(predictor, extractor, rules, output, **kwargs):
    return build_simpleppdb(predictor, extractor, rules, output, chunk_size=100, **kwargs)


def interrupt(lines):
    raise Interrupted(lines)


class TestBuildSimplePPDB:
    def test_rows_and_stats(self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor):
        output = tmp_path / "simpleppdb.tsv"
        stats = build(lexicon_predictor, lexicon_extractor, rules_file, output)
        rows = list(read_simpleppdb(output))

        assert stats.lines == 2500
        assert stats.skipped == 26 + 25
        assert stats.scored == len(rows) == 2500 - 51
        assert sum(stats.classes.values()) == stats.scored
        first = rows[0]
        assert (first.source, first.target) == ("awful", "bad")
        assert first.yhat == pytest.approx(2.4 - 1.2)
        assert first.predicted == RuleClass.SIMPLIFYING
        assert not (tmp_path / "simpleppdb.tsv.ckpt").exists()

    def test_mixed_phrases_are_scored(self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor):
        output = tmp_path / "simpleppdb.tsv"
        build(lexicon_predictor, lexicon_extractor, rules_file, output)
        mixed = [row for row in read_simpleppdb(output) if row.source == "the big house"]

        assert len(mixed) == 25
        assert {row.target for row in mixed} == {"a large , old house"}
        assert all(row.source != "," for row in read_simpleppdb(output))

    def test_punctuation_rule_is_skipped(self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor):
        baseline = build(lexicon_predictor, lexicon_extractor, rules_file, tmp_path / "baseline.tsv")
        with open(rules_file, "a", encoding="utf-8") as f:
            f.write("[,] ||| , ||| ; ||| 3.9\n")

        stats = build(lexicon_predictor, lexicon_extractor, rules_file, tmp_path / "out.tsv")

        assert stats.lines == baseline.lines + 1
        assert stats.skipped == baseline.skipped + 1
        assert stats.scored == baseline.scored
        assert (tmp_path / "out.tsv").read_bytes() == (tmp_path / "baseline.tsv").read_bytes()

    def test_warnings_use_file_line_numbers(
        self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor, caplog
    ):
        with caplog.at_level(logging.WARNING, logger="readrank.tasks"):
            build(lexicon_predictor, lexicon_extractor, rules_file, tmp_path / "out.tsv")

        assert "Skipping malformed rule at line 98:" in caplog.text
        assert "Skipping malformed rule at line 2426:" in caplog.text
        assert "Skipping rule at line 2451:" in caplog.text
        assert "Skipping malformed rule at line 1:" in caplog.text
        assert "Skipping malformed rule at line 2:" not in caplog.text

    def test_output_does_not_depend_on_jobs(
        self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor
    ):
        build(lexicon_predictor, lexicon_extractor, rules_file, tmp_path / "one.tsv", jobs=1)
        build(lexicon_predictor, lexicon_extractor, rules_file, tmp_path / "four.tsv", jobs=4)
        assert (tmp_path / "one.tsv").read_bytes() == (tmp_path / "four.tsv").read_bytes()

    def test_shared_cache_under_eviction(
        self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor, monkeypatch
    ):
        build(lexicon_predictor, lexicon_extractor, rules_file, tmp_path / "one.tsv", jobs=1)
        monkeypatch.setattr(features, "CACHE_SIZE", 2)

        stats = build(lexicon_predictor, lexicon_extractor, rules_file, tmp_path / "eight.tsv", jobs=8)

        assert stats.scored == 2500 - 51
        assert (tmp_path / "one.tsv").read_bytes() == (tmp_path / "eight.tsv").read_bytes()

    def test_resume_after_interruption(
        self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor
    ):
        reference = tmp_path / "reference.tsv"
        build(lexicon_predictor, lexicon_extractor, rules_file, reference)

        output = tmp_path / "resumed.tsv"
        with pytest.raises(Interrupted):
            build(lexicon_predictor, lexicon_extractor, rules_file, output, on_progress=interrupt)
        assert (tmp_path / "resumed.tsv.ckpt").exists()
        # bytes written after the last checkpoint are discarded on resume
        with open(output, "ab") as f:
            f.write(b"[JJ]\tpartial")

        progress = []
        stats = build(lexicon_predictor, lexicon_extractor, rules_file, output, on_progress=progress.append)
        assert progress[0] > 400
        assert stats.lines == 2500
        assert output.read_bytes() == reference.read_bytes()

    def test_checkpoint_with_other_thresholds_is_ignored(
        self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor
    ):
        thresholds = RuleThresholds(low=-1.5, high=1.5)
        reference = tmp_path / "reference.tsv"
        build(lexicon_predictor, lexicon_extractor, rules_file, reference, thresholds=thresholds)

        output = tmp_path / "out.tsv"
        with pytest.raises(Interrupted):
            build(lexicon_predictor, lexicon_extractor, rules_file, output, on_progress=interrupt)

        progress = []
        stats = build(
            lexicon_predictor,
            lexicon_extractor,
            rules_file,
            output,
            thresholds=thresholds,
            on_progress=progress.append,
        )
        assert progress[0] == 400
        assert stats.lines == 2500
        assert output.read_bytes() == reference.read_bytes()

    def test_checkpoint_for_another_input_is_ignored(
        self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor
    ):
        output = tmp_path / "out.tsv"
        output.write_text("stale\n", encoding="utf-8")
        (tmp_path / "out.tsv.ckpt").write_text(
            '{"input": "other.txt", "output_bytes": 6, "stats": {"lines": 100, "scored": 100, '
            '"skipped": 0, "classes": {}}}',
            encoding="utf-8",
        )
        stats = build(lexicon_predictor, lexicon_extractor, rules_file, output)
        assert stats.lines == 2500
        assert not output.read_text(encoding="utf-8").startswith("stale")

    def test_checkpoint_without_settings_is_ignored(
        self, rules_file, tmp_path, lexicon_predictor, lexicon_extractor
    ):
        output = tmp_path / "out.tsv"
        output.write_text("stale\n", encoding="utf-8")
        (tmp_path / "out.tsv.ckpt").write_text(
            f'{{"input": "{rules_file}", "output_bytes": 6, "stats": {{"lines": 100, "scored": 100, '
            '"skipped": 0, "classes": {}}}',
            encoding="utf-8",
        )
        stats = build(lexicon_predictor, lexicon_extractor, rules_file, output)
        assert stats.lines == 2500
        assert not output.read_text(encoding="utf-8").startswith("stale")

    def test_empty_input(self, tmp_path, lexicon_predictor, lexicon_extractor):
        rules = tmp_path / "empty.txt"
        rules.write_text("", encoding="utf-8")
        output = tmp_path / "out.tsv"
        stats = build(lexicon_predictor, lexicon_extractor, rules, output)
        assert stats.lines == 0 and stats.scored == 0
        assert output.read_bytes() == b""

    @pytest.mark.parametrize("kwargs", [{"jobs": 0}, {"chunk_size": 0}])
    def test_invalid_arguments(self, tmp_path, lexicon_predictor, lexicon_extractor, kwargs):
        with pytest.raises(ValueError):
            build_simpleppdb(
                lexicon_predictor, lexicon_extractor, tmp_path / "in", tmp_path / "out", **kwargs
            )


@pytest.mark.slow
class TestLargeBuild:
    @pytest.fixture(scope="class")
    def large_rules(self, tmp_path_factory):
        return write_rules(tmp_path_factory.mktemp("ppdb") / "ppdb.txt", 100_000)

    def test_jobs_and_resume(self, large_rules, tmp_path, lexicon_predictor, lexicon_extractor):
        reference = tmp_path / "one.tsv"
        stats = build_simpleppdb(lexicon_predictor, lexicon_extractor, large_rules, reference, jobs=1)
        build_simpleppdb(lexicon_predictor, lexicon_extractor, large_rules, tmp_path / "four.tsv", jobs=4)
        assert stats.lines == 100_000
        assert reference.read_bytes() == (tmp_path / "four.tsv").read_bytes()

        consumed = []

        def stop_halfway(lines):
            consumed.append(lines)
            if lines >= 50_000:
                raise Interrupted(lines)

        output = tmp_path / "resumed.tsv"
        with pytest.raises(Interrupted):
            build_simpleppdb(
                lexicon_predictor, lexicon_extractor, large_rules, output, jobs=4, on_progress=stop_halfway
            )
        resumed = build_simpleppdb(lexicon_predictor, lexicon_extractor, large_rules, output, jobs=2)

        assert consumed[-1] < 100_000
        assert resumed == stats
        assert output.read_bytes() == reference.read_bytes()
