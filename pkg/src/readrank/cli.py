import logging
import os
import sys
import tomllib
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Annotated, TextIO

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn
from rich.theme import Theme

from . import main
from .errors import (
    InputFormatError,
    ModelFileError,
    ReadRankError,
    ResourceMissingError,
    SchemaMismatchError,
    TrainingDivergedError,
)
from .predictor import FEATURE_GROUPS, TrainConfig
from .predictor.network import GRADCHECK_TOLERANCE
from .resources import LMConfig
from .tasks import RuleThresholds, format_row

load_dotenv()

custom_theme = Theme(
    {
        "header": "bold underline",
        "error": "bold red",
        "metric": "cyan",
    }
)

console_err = Console(stderr=True, no_color="NO_COLOR" in os.environ, theme=custom_theme)

app = typer.Typer(
    help="readrank ranks words and phrases by complexity and builds lexical simplification resources.",
    add_completion=False,
)

logger = logging.getLogger("readrank.cli")

EXIT_CODES = [
    (ResourceMissingError, 3, "resource-missing"),
    (SchemaMismatchError, 4, "schema-mismatch"),
    (InputFormatError, 5, "input-format"),
    (ModelFileError, 5, "model-file"),
    (TrainingDivergedError, 6, "training-diverged"),
    (ReadRankError, 7, "readrank"),
]
EXIT_GRADCHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_UNEXPECTED = 10


class Task(str, Enum):
    RANK = "rank"
    PPDB = "ppdb"


class EvalTask(str, Enum):
    RANK = "rank"
    PPDB = "ppdb"
    GENERATE = "generate"
    CWI = "cwi"


class CWIMethod(str, Enum):
    WC_ONLY = "wc-only"
    NEAREST_CENTROID = "nearest-centroid"


class LemmatizerName(str, Enum):
    SUFFIX = "suffix"
    WORDNET = "wordnet"


class TaggerName(str, Enum):
    RULE = "rule"
    NLTK = "nltk"


class ReportFormat(str, Enum):
    TEXT = "text"
    JSONL = "jsonl"


def setup_logger(verbose: int):
    levels = [
        logging.WARNING,  # 0 - default
        logging.INFO,  # 1 - -v
        logging.DEBUG,  # 2 - -vv
    ]

    log_level = levels[min(verbose, len(levels) - 1)]
    logging.basicConfig(
        level=log_level,
        format="%(name)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[
            RichHandler(console=console_err, rich_tracebacks=True, show_path=False),
        ],
        force=True,
    )


def _load_config(ctx: typer.Context, param: typer.CallbackParam, value: Path | None) -> Path | None:
    """
    Read a TOML file into the command's defaults: top-level keys apply to every
    command, a table named after the command overrides them.
    """
    if value is None:
        return value
    try:
        data = tomllib.loads(value.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as err:
        raise typer.BadParameter(f"Cannot read config {value}: {err}") from err

    defaults = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
    section = data.get(ctx.info_name, {})
    if isinstance(section, dict):
        defaults.update({k.replace("-", "_"): v for k, v in section.items()})
    ctx.default_map = {**(ctx.default_map or {}), **defaults}
    return value


# ---- Shared options ----
ConfigOption = Annotated[
    Path | None,
    typer.Option(
        "--config",
        help="TOML file of option defaults (flags override it).",
        exists=True,
        dir_okay=False,
        is_eager=True,
        callback=_load_config,
        rich_help_panel="Configuration",
    ),
]
VerboseOption = Annotated[
    int,
    typer.Option(
        "--verbose",
        "-v",
        count=True,
        help="Increase verbosity level (can be used multiple times. -v or -vv).",
        rich_help_panel="Output",
    ),
]
OutOption = Annotated[
    Path | None,
    typer.Option("--out", "-o", help="Output file (standard output when omitted).", rich_help_panel="Output"),
]
ResourcesOption = Annotated[
    Path | None,
    typer.Option(
        "--resources",
        envvar=main.RESOURCE_ENV,
        help="Directory holding resources under their conventional names.",
        file_okay=False,
        rich_help_panel="Resources",
    ),
]
LexiconOption = Annotated[
    Path | None, typer.Option("--lexicon", help="Word-complexity lexicon TSV.", rich_help_panel="Resources")
]
LMOption = Annotated[
    Path | None, typer.Option("--lm", help="Language model file (train-lm).", rich_help_panel="Resources")
]
NgramsOption = Annotated[
    Path | None, typer.Option("--ngrams", help="N-gram count table.", rich_help_panel="Resources")
]
SimpleCountsOption = Annotated[
    Path | None,
    typer.Option("--simple-counts", help="Simple Wikipedia count table.", rich_help_panel="Resources"),
]
NormalCountsOption = Annotated[
    Path | None,
    typer.Option("--normal-counts", help="Normal Wikipedia count table.", rich_help_panel="Resources"),
]
EmbeddingsOption = Annotated[
    Path | None,
    typer.Option("--embeddings", help="Embeddings (word2vec text or binary, or cache).", rich_help_panel="Resources"),
]
LemmatizerOption = Annotated[
    LemmatizerName,
    typer.Option("--lemmatizer", case_sensitive=False, help="Lexicon lookup lemmatizer.", rich_help_panel="Resources"),
]
LowOption = Annotated[
    float, typer.Option("--low", help="Scores below are complicating.", rich_help_panel="Configuration")
]
HighOption = Annotated[
    float, typer.Option("--high", help="Scores above are simplifying.", rich_help_panel="Configuration")
]
FeaturesOption = Annotated[
    str | None,
    typer.Option(
        "--features",
        help=f"Comma-separated feature groups ({','.join(FEATURE_GROUPS)}).",
        rich_help_panel="Training",
    ),
]
SeedOption = Annotated[int, typer.Option("--seed", help="Seed of every random draw.", rich_help_panel="Training")]


def _groups(features: str | None) -> list[str] | None:
    if not features:
        return None
    groups = [g.strip() for g in features.split(",") if g.strip()]
    unknown = set(groups) - set(FEATURE_GROUPS)
    if unknown:
        raise typer.BadParameter(f"Unknown feature groups: {sorted(unknown)}", param_hint="--features")
    return groups


def _paths(resources: Path | None, **explicit: Path | None) -> main.ResourcePaths:
    return main.ResourcePaths.resolve(resources, **explicit)


@contextmanager
def _output(out: Path | None) -> Iterator[TextIO]:
    if out is None:
        yield sys.stdout
        return
    with open(out, "w", encoding="utf-8") as f:
        yield f


def _print_error(kind: str, message: str):
    console_err.print(f"error[{kind}]: {message}", style="error", markup=False, highlight=False, soft_wrap=True)


@contextmanager
def _cli_errors(verbose: int) -> Iterator[None]:
    """Print a one-line ``error[kind]: message`` and exit with the error's code."""
    try:
        yield
    except (typer.Exit, typer.BadParameter):
        raise
    except ReadRankError as err:
        for error_type, code, kind in EXIT_CODES:
            if isinstance(err, error_type):
                message = err.args[0] if err.args else ""
                _print_error(kind, message)
                logger.debug("Traceback", exc_info=err)
                raise typer.Exit(code=code)
    except Exception as err:
        _print_error("unexpected", str(err))
        logger.critical(f"Unexpected error: {err}", exc_info=True if verbose > 0 else False)
        raise typer.Exit(code=EXIT_UNEXPECTED)


class ProgressUI:
    """Transient progress bar on standard error."""

    def __init__(self, description: str, total: int | None = None):
        self._progress = Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}" if total else "{task.completed}"),
            console=console_err,
            transient=True,
            redirect_stdout=False,
        )
        self._task_id = self._progress.add_task(description, total=total)

    def __enter__(self):
        self._progress.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._progress.stop()

    def advance(self, *_):
        self._progress.advance(self._task_id)

    def update(self, completed: int):
        self._progress.update(self._task_id, completed=completed)


@app.callback(invoke_without_command=True)
def callback(ctx: typer.Context):
    """
    Lexical simplification toolkit: word-complexity lexicon, pairwise neural
    readability ranker, SimplePPDB++ and complex word identification.
    """
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit(code=EXIT_USAGE)


@app.command("build-lexicon")
def build_lexicon(
    ratings: Annotated[
        Path,
        typer.Argument(help="Ratings TSV (word, then one column per annotator).", exists=True, dir_okay=False),
    ],
    out: Annotated[Path, typer.Option("--out", "-o", help="Lexicon TSV to write.", rich_help_panel="Output")],
    threshold: Annotated[
        float,
        typer.Option(help="Discard ratings this far from the mean of the others.", rich_help_panel="Configuration"),
    ] = 2.0,
    strict: Annotated[
        bool,
        typer.Option("--strict", help="Discard only gaps strictly above the threshold.", rich_help_panel="Configuration"),
    ] = False,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Aggregate human ratings into a word-complexity lexicon."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        result = main.build_lexicon(ratings, out, threshold, strict)
        typer.echo(f"words\t{len(result.lexicon)}")
        typer.echo(f"flagged\t{len(result.lexicon.flagged)}")
        for name, value in (
            ("agreement", result.agreement),
            ("agreement_after_discard", result.agreement_after_discard),
        ):
            typer.echo(f"{name}\t{'-' if value is None else f'{value:.4f}'}")


@app.command("train-lm")
def train_lm(
    corpus: Annotated[Path, typer.Argument(help="Corpus, one sentence per line.", exists=True, dir_okay=False)],
    out: Annotated[Path, typer.Option("--out", "-o", help="Language model file to write.", rich_help_panel="Output")],
    order: Annotated[int, typer.Option(min=1, help="Highest n-gram order.", rich_help_panel="Configuration")] = 5,
    discount: Annotated[
        float, typer.Option(help="Kneser-Ney absolute discount.", rich_help_panel="Configuration")
    ] = 0.75,
    alpha: Annotated[
        float, typer.Option(help="Additive smoothing of unigram-only models.", rich_help_panel="Configuration")
    ] = 1.0,
    keep_case: Annotated[
        bool, typer.Option("--keep-case", help="Do not lowercase tokens.", rich_help_panel="Configuration")
    ] = False,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Train a Kneser-Ney n-gram language model."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        lm_config = LMConfig(order=order, discount=discount, alpha=alpha, lowercase=not keep_case)
        result = main.build_language_model(corpus, out, lm_config)
        typer.echo(f"sentences\t{result.sentences}")
        typer.echo(f"vocabulary\t{len(result.lm.vocabulary)}")
        typer.echo(f"perplexity\t{result.perplexity:.4f}")


@app.command()
def train(
    data: Annotated[
        Path,
        typer.Argument(help="Ranking data (rank) or labelled rules (ppdb).", exists=True, dir_okay=False),
    ],
    out: Annotated[Path, typer.Option("--out", "-o", help="Model file to write.", rich_help_panel="Output")],
    task: Annotated[Task, typer.Option(case_sensitive=False, help="Training task.", rich_help_panel="Training")] = Task.RANK,
    features: FeaturesOption = None,
    no_binning: Annotated[
        bool, typer.Option("--no-binning", help="Feed raw scalar features.", rich_help_panel="Training")
    ] = False,
    no_context: Annotated[
        bool, typer.Option("--no-context", help="Ignore sentence context (rank).", rich_help_panel="Training")
    ] = False,
    lr: Annotated[
        float | None, typer.Option("--lr", help="Learning rate (task default when omitted).", rich_help_panel="Training")
    ] = None,
    epochs: Annotated[int, typer.Option(min=1, rich_help_panel="Training")] = 100,
    dropout: Annotated[float, typer.Option(min=0.0, max=0.99, rich_help_panel="Training")] = 0.2,
    batch_size: Annotated[int, typer.Option(min=1, rich_help_panel="Training")] = 32,
    k: Annotated[int, typer.Option("--k", min=1, help="Gaussian bins per feature.", rich_help_panel="Training")] = 10,
    gamma: Annotated[float, typer.Option(help="Gaussian width / bin width.", rich_help_panel="Training")] = 0.2,
    seed: SeedOption = 0,
    resources: ResourcesOption = None,
    lexicon: LexiconOption = None,
    lm: LMOption = None,
    ngrams: NgramsOption = None,
    simple_counts: SimpleCountsOption = None,
    normal_counts: NormalCountsOption = None,
    embeddings: EmbeddingsOption = None,
    lemmatizer: LemmatizerOption = LemmatizerName.SUFFIX,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Train a neural readability ranker."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        overrides = {"learning_rate": lr} if lr is not None else {}
        train_config = TrainConfig.for_task(
            task.value,
            epochs=epochs,
            dropout=dropout,
            batch_size=batch_size,
            k=k,
            gamma=gamma,
            binning=not no_binning,
            seed=seed,
            **overrides,
        )
        paths = _paths(
            resources,
            lexicon=lexicon,
            lm=lm,
            ngram_counts=ngrams,
            simple_counts=simple_counts,
            normal_counts=normal_counts,
            embeddings=embeddings,
        )
        with ProgressUI("Training...", total=epochs) as ui:
            model = main.train_model(
                task.value,
                data,
                paths,
                train_config,
                groups=_groups(features),
                use_context=not no_context,
                lemmatizer=lemmatizer.value,
                output_path=out,
                on_epoch=ui.advance,
            )
        typer.echo(f"final_loss\t{model.losses[-1]:.6f}")


@app.command()
def rank(
    model: Annotated[Path, typer.Argument(help="Model trained with --task rank.", exists=True, dir_okay=False)],
    data: Annotated[Path, typer.Argument(help="Ranking instances.", exists=True, dir_okay=False)],
    out: OutOption = None,
    no_context: Annotated[
        bool, typer.Option("--no-context", help="Ignore sentence context.", rich_help_panel="Configuration")
    ] = False,
    resources: ResourcesOption = None,
    lexicon: LexiconOption = None,
    lm: LMOption = None,
    ngrams: NgramsOption = None,
    simple_counts: SimpleCountsOption = None,
    normal_counts: NormalCountsOption = None,
    embeddings: EmbeddingsOption = None,
    lemmatizer: LemmatizerOption = LemmatizerName.SUFFIX,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Rank substitution candidates, simplest first (``index<TAB>c1<TAB>c2...``)."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        paths = _paths(
            resources,
            lexicon=lexicon,
            lm=lm,
            ngram_counts=ngrams,
            simple_counts=simple_counts,
            normal_counts=normal_counts,
            embeddings=embeddings,
        )
        with _output(out) as stream:
            for index, _, ranked in main.run_rank(model, data, paths, not no_context, lemmatizer.value):
                print("\t".join([str(index), *(r.candidate for r in ranked)]), file=stream, flush=True)


@app.command("classify-ppdb")
def classify_ppdb(
    rules: Annotated[Path, typer.Argument(help="Labelled rules or PPDB lines.", exists=True, dir_okay=False)],
    model: Annotated[
        Path | None,
        typer.Option("--model", "-m", help="Model trained with --task ppdb.", exists=True, dir_okay=False, rich_help_panel="Inputs"),
    ] = None,
    cv: Annotated[
        int | None,
        typer.Option("--cv", min=2, help="Cross-validate over K vocabulary-disjoint folds instead.", rich_help_panel="Training"),
    ] = None,
    low: LowOption = -0.4,
    high: HighOption = 0.4,
    features: FeaturesOption = None,
    epochs: Annotated[int, typer.Option(min=1, rich_help_panel="Training")] = 100,
    lr: Annotated[float, typer.Option("--lr", rich_help_panel="Training")] = 0.001,
    seed: SeedOption = 0,
    out: OutOption = None,
    output_format: Annotated[
        ReportFormat,
        typer.Option("--format", "-f", case_sensitive=False, help="Report format (--cv).", rich_help_panel="Output"),
    ] = ReportFormat.TEXT,
    resources: ResourcesOption = None,
    lexicon: LexiconOption = None,
    ngrams: NgramsOption = None,
    simple_counts: SimpleCountsOption = None,
    normal_counts: NormalCountsOption = None,
    embeddings: EmbeddingsOption = None,
    lemmatizer: LemmatizerOption = LemmatizerName.SUFFIX,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Classify paraphrase rules as simplifying, no-difference or complicating."""
    setup_logger(verbose)
    if (model is None) == (cv is None):
        raise typer.BadParameter("Give exactly one of --model or --cv.")
    with _cli_errors(verbose):
        thresholds = RuleThresholds(low, high)
        paths = _paths(
            resources,
            lexicon=lexicon,
            ngram_counts=ngrams,
            simple_counts=simple_counts,
            normal_counts=normal_counts,
            embeddings=embeddings,
        )
        with _output(out) as stream:
            if cv is not None:
                train_config = TrainConfig.for_task("ppdb", learning_rate=lr, epochs=epochs, seed=seed)
                with ProgressUI("Cross-validating...", total=cv) as ui:
                    report = main.run_rule_cross_validation(
                        rules, paths, train_config, cv, thresholds, _groups(features), lemmatizer.value, ui.advance
                    )
                print(report.to_text() if output_format == ReportFormat.TEXT else report.to_jsonl(), file=stream)
                return
            for rule in main.run_classify_rules(model, rules, paths, thresholds, lemmatizer.value):
                stream.write(format_row(rule))


@app.command("build-simpleppdb")
def build_simpleppdb(
    model: Annotated[Path, typer.Argument(help="Model trained with --task ppdb.", exists=True, dir_okay=False)],
    rules: Annotated[Path, typer.Argument(help="PPDB rule file.", exists=True, dir_okay=False)],
    out: Annotated[Path, typer.Option("--out", "-o", help="SimplePPDB++ TSV to write.", rich_help_panel="Output")],
    jobs: Annotated[int, typer.Option("--jobs", "-j", min=1, help="Scoring threads.", rich_help_panel="Configuration")] = 1,
    chunk_size: Annotated[
        int, typer.Option(min=1, help="Rules per batch (resume granularity).", rich_help_panel="Configuration")
    ] = 1000,
    low: LowOption = -0.4,
    high: HighOption = 0.4,
    resources: ResourcesOption = None,
    lexicon: LexiconOption = None,
    ngrams: NgramsOption = None,
    simple_counts: SimpleCountsOption = None,
    normal_counts: NormalCountsOption = None,
    embeddings: EmbeddingsOption = None,
    lemmatizer: LemmatizerOption = LemmatizerName.SUFFIX,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Score every PPDB rule (resumable after an interruption)."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        paths = _paths(
            resources,
            lexicon=lexicon,
            ngram_counts=ngrams,
            simple_counts=simple_counts,
            normal_counts=normal_counts,
            embeddings=embeddings,
        )
        with ProgressUI("Scoring rules...") as ui:
            stats = main.run_build_simpleppdb(
                model, rules, out, paths, jobs, chunk_size, RuleThresholds(low, high), lemmatizer.value, ui.update
            )
        typer.echo(f"scored\t{stats.scored}")
        typer.echo(f"skipped\t{stats.skipped}")
        for label, count in sorted(stats.classes.items()):
            typer.echo(f"{label}\t{count}")


@app.command()
def generate(
    simpleppdb: Annotated[Path, typer.Argument(help="SimplePPDB++ TSV.", exists=True, dir_okay=False)],
    targets: Annotated[
        list[str] | None, typer.Argument(help="Target words or phrases.", show_default=False)
    ] = None,
    input_file: Annotated[
        Path | None,
        typer.Option(
            "--input-file",
            "-i",
            help="Targets, one per line (optionally followed by a tab and a category).",
            exists=True,
            dir_okay=False,
            rich_help_panel="Inputs",
        ),
    ] = None,
    category: Annotated[
        str | None, typer.Option(help="Syntactic category of the targets, e.g. [NN].", rich_help_panel="Configuration")
    ] = None,
    only_simplifying: Annotated[
        bool,
        typer.Option("--only-simplifying", help="Keep simplifying rules only.", rich_help_panel="Configuration"),
    ] = False,
    out: OutOption = None,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Generate ranked substitutions (``target<TAB>c1<TAB>c2...``)."""
    setup_logger(verbose)
    requests = [(target, category) for target in targets or []]
    if input_file is not None:
        for line in input_file.read_text(encoding="utf-8").splitlines():
            if line.strip():
                target, _, line_category = line.partition("\t")
                requests.append((target.strip(), line_category.strip() or category))
    if not requests:
        raise typer.BadParameter("Provide at least one target or an input file.")
    with _cli_errors(verbose):
        with _output(out) as stream:
            for target, substitutions in main.run_generate(simpleppdb, requests, only_simplifying):
                print("\t".join([target, *(s.candidate for s in substitutions)]), file=stream)


@app.command()
def cwi(
    train_file: Annotated[Path, typer.Argument(help="Labelled training instances.", exists=True, dir_okay=False)],
    test_file: Annotated[Path, typer.Argument(help="Instances to label.", exists=True, dir_okay=False)],
    method: Annotated[
        CWIMethod, typer.Option(case_sensitive=False, help="Classifier.", rich_help_panel="Configuration")
    ] = CWIMethod.WC_ONLY,
    with_wc: Annotated[
        bool,
        typer.Option("--with-wc", help="Add lexicon features (nearest-centroid).", rich_help_panel="Configuration"),
    ] = False,
    layout: Annotated[
        str, typer.Option(help="auto, semeval2016 or cwig3g2.", rich_help_panel="Inputs")
    ] = "auto",
    senses: Annotated[
        Path | None, typer.Option("--senses", help="Sense count table.", rich_help_panel="Resources")
    ] = None,
    wordnet: Annotated[
        bool, typer.Option("--wordnet", help="Count senses with WordNet.", rich_help_panel="Resources")
    ] = False,
    tagger: Annotated[
        TaggerName, typer.Option(case_sensitive=False, help="POS tagger.", rich_help_panel="Resources")
    ] = TaggerName.RULE,
    out: OutOption = None,
    resources: ResourcesOption = None,
    lexicon: LexiconOption = None,
    ngrams: NgramsOption = None,
    embeddings: EmbeddingsOption = None,
    lemmatizer: LemmatizerOption = LemmatizerName.SUFFIX,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Identify complex words (``target<TAB>label``, 1 = complex)."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        paths = _paths(resources, lexicon=lexicon, ngram_counts=ngrams, embeddings=embeddings, senses=senses)
        instances, predictions, report = main.run_cwi(
            train_file,
            test_file,
            paths,
            method=method.value,
            with_wc=with_wc,
            wordnet=wordnet,
            tagger=tagger.value,
            layout=layout,
            lemmatizer=lemmatizer.value,
        )
        with _output(out) as stream:
            for instance, label in zip(instances, predictions):
                print(f"{instance.target}\t{label}", file=stream)
        logger.info(f"Test G-score {report.metrics['g_score']:.4f}, F-score {report.metrics['f_score']:.4f}")


@app.command("eval")
def evaluate(
    task: Annotated[EvalTask, typer.Argument(case_sensitive=False, help="Evaluated task.")],
    predictions: Annotated[Path, typer.Argument(help="Predictions file.", exists=True, dir_okay=False)],
    gold: Annotated[Path, typer.Argument(help="Gold file.", exists=True, dir_okay=False)],
    baseline: Annotated[
        Path | None,
        typer.Option(help="Second ranking for a paired bootstrap test (rank).", exists=True, dir_okay=False, rich_help_panel="Inputs"),
    ] = None,
    resamples: Annotated[int, typer.Option(min=1, help="Bootstrap resamples.", rich_help_panel="Configuration")] = 10_000,
    seed: SeedOption = 0,
    output_format: Annotated[
        ReportFormat, typer.Option("--format", "-f", case_sensitive=False, rich_help_panel="Output")
    ] = ReportFormat.TEXT,
    out: OutOption = None,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Score predictions against gold data."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        report = main.evaluate(task.value, predictions, gold, baseline, resamples, seed)
        with _output(out) as stream:
            print(report.to_text() if output_format == ReportFormat.TEXT else report.to_jsonl(), file=stream)


@app.command()
def gradcheck(
    seed: SeedOption = 0,
    draws: Annotated[int, typer.Option(min=1, help="Random networks to check.", rich_help_panel="Configuration")] = 100,
    config: ConfigOption = None,
    verbose: VerboseOption = 0,
):
    """Compare backpropagation with finite differences (exit 1 on failure)."""
    setup_logger(verbose)
    with _cli_errors(verbose):
        result = main.run_gradient_check(seed, draws)
        typer.echo(f"max_relative_error\t{result.max_relative_error:.3e}")
        if not result.passed:
            _print_error("gradcheck", f"relative error above {GRADCHECK_TOLERANCE}")
            raise typer.Exit(code=EXIT_GRADCHECK_FAILED)


if __name__ == "__main__":
    app()
