"""
Streaming construction of a SimplePPDB++ resource.

PPDB lines are read in fixed-size chunks, scored (optionally by a pool of
worker threads) and written in input order as
``category<TAB>source<TAB>target<TAB>yhat<TAB>class<TAB>quality``.

After each written window of chunks a JSON checkpoint records how many input
lines were consumed and the output size at that point, along with the model
and thresholds the build used. A rerun with the same arguments truncates the
output to that size and continues after the consumed lines, so an interrupted
run produces the same bytes as an uninterrupted one. A checkpoint written
with another input, model or thresholds is ignored.
"""

import hashlib
import json
import logging
import os
from collections import Counter
from collections.abc import Callable, Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import islice
from pathlib import Path
from typing import Any

from ..predictor import PhraseFeatureExtractor, Predictor
from ..text import tokenize
from .datasets import PPDB_COLUMNS, ParaphraseRule, RuleClass, read_ppdb_rules
from .paraphrase import RuleThresholds, score_rules

__all__ = ["BuildStats", "build_simpleppdb", "format_row"]

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1000
CHUNKS_PER_WORKER = 4


@dataclass
class BuildStats:
    """Counters of a build, also persisted in the checkpoint."""

    lines: int = 0
    scored: int = 0
    skipped: int = 0
    classes: dict[str, int] = field(default_factory=dict)

    def add(self, other: "BuildStats") -> None:
        self.lines += other.lines
        self.scored += other.scored
        self.skipped += other.skipped
        self.classes = dict(Counter(self.classes) + Counter(other.classes))


@dataclass
class _Checkpoint:
    input: str
    output_bytes: int
    stats: BuildStats
    settings: dict[str, Any] = field(default_factory=dict)

    def save(self, path: Path) -> None:
        tmp_path = path.with_name(path.name + ".tmp")
        tmp_path.write_text(
            json.dumps(
                {
                    "input": self.input,
                    "output_bytes": self.output_bytes,
                    "stats": asdict(self.stats),
                    "settings": self.settings,
                },
                sort_keys=True,
            ),
            encoding="utf-8",
        )
        os.replace(tmp_path, path)

    @classmethod
    def load(cls, path: Path) -> "_Checkpoint":
        data = json.loads(path.read_text(encoding="utf-8"))
        return cls(data["input"], data["output_bytes"], BuildStats(**data["stats"]), data.get("settings", {}))


def _model_fingerprint(predictor: Predictor) -> str:
    """SHA-256 of the model file, or of the schema for an in-memory model."""
    model_path = getattr(predictor, "model_path", None)
    if model_path is not None and Path(model_path).is_file():
        digest = hashlib.sha256()
        with open(model_path, "rb") as model_file:
            for block in iter(lambda: model_file.read(1 << 20), b""):
                digest.update(block)
        return digest.hexdigest()
    return f"schema:{predictor.schema.hash}"


def _build_settings(
    predictor: Predictor,
    extractor: PhraseFeatureExtractor,
    thresholds: RuleThresholds,
    columns: Mapping[str, int],
) -> dict[str, Any]:
    return {
        "model": _model_fingerprint(predictor),
        "schema": extractor.schema.hash,
        "thresholds": [thresholds.low, thresholds.high],
        "columns": dict(sorted(columns.items())),
    }


def format_row(rule: ParaphraseRule) -> str:
    return (
        f"{rule.category}\t{rule.source}\t{rule.target}\t{rule.yhat:.6f}\t"
        f"{rule.predicted.label}\t{rule.quality:g}\n"
    )


def _chunks(lines: Iterator[str], size: int, start: int = 1) -> Iterator[tuple[int, list[str]]]:
    """Yield ``(line number of the first line, lines)`` pairs."""
    while chunk := list(islice(lines, size)):
        yield start, chunk
        start += len(chunk)


def _scorable(rule: ParaphraseRule, line_number: int) -> bool:
    if tokenize(rule.source) and tokenize(rule.target):
        return True
    logger.warning(
        f"Skipping rule at line {line_number}: '{rule.source}' -> '{rule.target}' has no word token"
    )
    return False


def build_simpleppdb(
    predictor: Predictor,
    extractor: PhraseFeatureExtractor,
    rules_path: str | Path,
    output_path: str | Path,
    jobs: int = 1,
    chunk_size: int = CHUNK_SIZE,
    thresholds: RuleThresholds = RuleThresholds(),
    columns: Mapping[str, int] = PPDB_COLUMNS,
    checkpoint_path: str | Path | None = None,
    on_progress: Callable[[int], None] | None = None,
) -> BuildStats:
    """
    Score every rule of a PPDB file and write the SimplePPDB++ TSV.

    Args:
        predictor: Trained model (paraphrase features, no context).
        extractor: Feature extractor with the model's schema.
        rules_path: PPDB input file.
        output_path: SimplePPDB++ output file.
        jobs: Number of worker threads; output order does not depend on it.
        chunk_size: Rules per scoring batch, also the resume granularity.
        checkpoint_path: Progress file (``<output>.ckpt`` by default). It is
            removed once the build completes.
        on_progress: Called with the number of input lines consumed so far.

    Returns:
        Counts of scored and skipped lines and of each class. Skipped lines
        are malformed ones and rules with a side made only of punctuation.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    rules_path, output_path = Path(rules_path), Path(output_path)
    checkpoint_path = (
        Path(checkpoint_path) if checkpoint_path else output_path.with_name(output_path.name + ".ckpt")
    )
    settings = _build_settings(predictor, extractor, thresholds, columns)

    stats = BuildStats()
    offset = 0
    if checkpoint_path.exists() and output_path.exists():
        checkpoint = _Checkpoint.load(checkpoint_path)
        if checkpoint.input != str(rules_path):
            logger.warning(f"Ignoring checkpoint for another input ({checkpoint.input})")
        elif checkpoint.settings != settings:
            changed = sorted(k for k in settings if checkpoint.settings.get(k) != settings[k])
            logger.warning(f"Ignoring checkpoint written with other settings ({', '.join(changed)})")
        else:
            stats, offset = checkpoint.stats, checkpoint.output_bytes
            logger.info(f"Resuming after {stats.lines} lines ({stats.scored} rules scored)")

    def score_chunk(chunk: tuple[int, list[str]]) -> tuple[str, BuildStats]:
        start, lines = chunk
        parsed = list(read_ppdb_rules(lines, columns, start=start))
        rules = [
            rule
            for line_number, rule in enumerate(parsed, start=start)
            if rule is not None and _scorable(rule, line_number)
        ]
        score_rules(predictor, rules, extractor, thresholds)
        chunk_stats = BuildStats(
            lines=len(lines),
            scored=len(rules),
            skipped=len(parsed) - len(rules),
            classes=dict(Counter(rule.predicted.label for rule in rules)),
        )
        return "".join(format_row(rule) for rule in rules), chunk_stats

    window = jobs * CHUNKS_PER_WORKER
    with (
        open(rules_path, encoding="utf-8") as source,
        open(output_path, "r+b" if offset else "wb") as sink,
        ThreadPoolExecutor(max_workers=jobs) as pool,
    ):
        sink.truncate(offset)
        sink.seek(offset)
        lines = (line.rstrip("\r\n") for line in islice(source, stats.lines, None))
        chunks = _chunks(lines, chunk_size, start=stats.lines + 1)
        while batch := list(islice(chunks, window)):
            for text, chunk_stats in pool.map(score_chunk, batch):
                sink.write(text.encode("utf-8"))
                stats.add(chunk_stats)
            sink.flush()
            os.fsync(sink.fileno())
            _Checkpoint(str(rules_path), sink.tell(), stats, settings).save(checkpoint_path)
            if on_progress is not None:
                on_progress(stats.lines)

    checkpoint_path.unlink(missing_ok=True)
    if stats.skipped:
        logger.warning(f"Skipped {stats.skipped} malformed or unscorable rule lines")
    logger.info(
        f"Scored {stats.scored} rules: "
        + ", ".join(f"{c.label}={stats.classes.get(c.label, 0)}" for c in RuleClass)
    )
    return stats
