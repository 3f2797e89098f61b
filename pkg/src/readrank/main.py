import logging
import os
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass, fields
from pathlib import Path
from typing import NamedTuple

from .errors import ReadRankError, ResourceMissingError, UndefinedMetricError
from .lexicon import (
    Lemmatizer,
    SuffixLemmatizer,
    WordComplexityLexicon,
    WordNetLemmatizerAdapter,
    aggregate_ratings,
    load_lexicon,
    load_ratings,
    mean_agreement,
    save_lexicon,
)
from .metrics import (
    EvalReport,
    class_precisions,
    paired_bootstrap,
    precision_at_1,
    ranking_pearson,
    score_generated_lists,
)
from .predictor import (
    FEATURE_GROUPS,
    FeatureResources,
    FeatureSchema,
    NRRModel,
    NRRPredictor,
    PhraseFeatureExtractor,
    TrainConfig,
    gradient_check,
    save_model,
    train_nrr,
)
from .predictor.network import GradientCheckResult
from .resources import (
    LMConfig,
    NGramLanguageModel,
    load_embeddings,
    load_frequency_table,
    load_lm,
    save_lm,
    score_sentence,
    train_lm,
)
from .tasks import (
    BuildStats,
    CountSenseInventory,
    CWIResources,
    NLTKTagger,
    ParaphraseRule,
    RankedCandidate,
    RankingInstance,
    RuleClass,
    RuleThresholds,
    RuleBasedTagger,
    Substitution,
    WordNetSenseInventory,
    build_simpleppdb,
    cross_validate_rules,
    cwi_nearest_centroid,
    cwi_wc_only,
    evaluate_cwi,
    generate_substitutions,
    rank_candidates,
    ranking_training_set,
    read_candidate_lists,
    read_cwi,
    read_labelled_rules,
    read_labels,
    read_ranking_instances,
    read_rules,
    read_simpleppdb,
    rule_training_set,
    score_rules,
)
from .tasks.cwi import CWI_FEATURES
from .text import tokenize

logger = logging.getLogger(__name__)

RESOURCE_ENV = "READRANK_RESOURCES"
TASKS = ("rank", "ppdb")


@contextmanager
def _library_errors():
    try:
        yield
    except ReadRankError:
        raise
    except Exception as err:
        raise ReadRankError(f"A critical error occurred: {err}") from err


@dataclass
class ResourcePaths:
    """
    Locations of the shared resources. Unset entries fall back to
    conventional file names inside the resource directory.
    """

    lexicon: Path | None = None
    lm: Path | None = None
    ngram_counts: Path | None = None
    simple_counts: Path | None = None
    normal_counts: Path | None = None
    embeddings: Path | None = None
    senses: Path | None = None

    DEFAULT_FILES = {
        "lexicon": ["lexicon.tsv"],
        "lm": ["lm.bin"],
        "ngram_counts": ["google_ngrams.tsv"],
        "simple_counts": ["simplewiki.tsv"],
        "normal_counts": ["wiki.tsv"],
        "embeddings": ["embeddings.cache", "embeddings.bin", "embeddings.txt"],
        "senses": ["senses.tsv"],
    }

    @classmethod
    def resolve(cls, directory: str | Path | None = None, **explicit: Path | None) -> "ResourcePaths":
        """
        Args:
            directory: Resource directory; defaults to ``$READRANK_RESOURCES``.
            explicit: Paths given by the caller, taking precedence.
        """
        directory = directory or os.environ.get(RESOURCE_ENV)
        resolved = {}
        for item in fields(cls):
            path = explicit.get(item.name)
            if path is None and directory:
                candidates = [Path(directory) / name for name in cls.DEFAULT_FILES[item.name]]
                path = next((c for c in candidates if c.exists()), None)
            resolved[item.name] = Path(path) if path is not None else None
        return cls(**resolved)

    def require(self, name: str, needed_by: str) -> Path:
        """
        Raises:
            ResourceMissingError: If the resource has no path or the file is absent.
        """
        path = getattr(self, name)
        if path is None or not Path(path).exists():
            raise ResourceMissingError(name if path is None else str(path), needed_by=needed_by)
        return Path(path)


_LOADERS: dict[str, Callable] = {
    "lexicon": load_lexicon,
    "lm": load_lm,
    "ngram_counts": load_frequency_table,
    "simple_counts": load_frequency_table,
    "normal_counts": load_frequency_table,
    "embeddings": load_embeddings,
}


def make_lemmatizer(name: str) -> Lemmatizer:
    if name == "suffix":
        return SuffixLemmatizer()
    if name == "wordnet":
        return WordNetLemmatizerAdapter()
    raise ValueError(f"Unknown lemmatizer '{name}' (suffix or wordnet)")


def default_schema(task: str, groups: Sequence[str] | None = None) -> FeatureSchema:
    """All groups for ranking; paraphrase rules have no context."""
    if groups:
        return FeatureSchema.default(groups)
    if task == "ppdb":
        return FeatureSchema.default([g for g in FEATURE_GROUPS if g != "context"])
    return FeatureSchema.default()


def load_feature_resources(
    paths: ResourcePaths, schema: FeatureSchema, lemmatizer: str = "suffix"
) -> FeatureResources:
    """
    Load the resources the enabled feature groups need, and nothing else.

    Raises:
        ResourceMissingError: If a needed resource cannot be found.
    """
    resources = FeatureResources(lemmatizer=make_lemmatizer(lemmatizer))
    for group in schema.groups:
        for name in FeatureResources.REQUIRED.get(group, []):
            if getattr(resources, name) is None:
                setattr(resources, name, _LOADERS[name](paths.require(name, group)))
    return resources


def make_extractor(
    paths: ResourcePaths, schema: FeatureSchema, lemmatizer: str = "suffix"
) -> PhraseFeatureExtractor:
    return PhraseFeatureExtractor(load_feature_resources(paths, schema, lemmatizer), schema)


class LexiconBuild(NamedTuple):
    lexicon: WordComplexityLexicon
    agreement: float | None
    agreement_after_discard: float | None


def build_lexicon(
    ratings_path: str | Path,
    output_path: str | Path,
    threshold: float = 2.0,
    strict: bool = False,
) -> LexiconBuild:
    """
    Aggregate a ratings file into a lexicon file and measure annotator agreement
    before and after discarding outlying ratings.
    """
    with _library_errors():
        records = load_ratings(ratings_path)
        lexicon = aggregate_ratings(records, threshold, strict)
        save_lexicon(lexicon, output_path)
        agreement = []
        for discard in (False, True):
            try:
                agreement.append(
                    mean_agreement(records, discard, threshold=threshold, strict=strict)
                )
            except UndefinedMetricError as err:
                logger.warning(f"Agreement undefined: {err}")
                agreement.append(None)
        logger.info(
            f"Mean annotator agreement: {agreement[0]} (after discarding outliers: {agreement[1]})"
        )
        return LexiconBuild(lexicon, *agreement)


class LMBuild(NamedTuple):
    lm: NGramLanguageModel
    sentences: int
    perplexity: float


def read_corpus(path: str | Path) -> Iterator[list[str]]:
    """Tokenized sentences of a one-sentence-per-line corpus."""
    with open(path, encoding="utf-8") as f:
        for line in f:
            tokens = tokenize(line)
            if tokens:
                yield tokens


def build_language_model(
    corpus_path: str | Path, output_path: str | Path, config: LMConfig | None = None
) -> LMBuild:
    """Train, save and report the training-corpus perplexity of an n-gram model."""
    with _library_errors():
        config = config or LMConfig()
        lm = train_lm(read_corpus(corpus_path), config=config)
        save_lm(lm, output_path)

        total, predicted, sentences = 0.0, 0, 0
        for tokens in read_corpus(corpus_path):
            total += score_sentence(lm, tokens)
            predicted += len(tokens) + (1 if lm.order > 1 else 0)
            sentences += 1
        perplexity = 10 ** (-total / predicted)
        logger.info(f"Training perplexity: {perplexity:.3f}")
        return LMBuild(lm, sentences, perplexity)


def train_model(
    task: str,
    data_path: str | Path,
    paths: ResourcePaths,
    config: TrainConfig,
    groups: Sequence[str] | None = None,
    use_context: bool = True,
    lemmatizer: str = "suffix",
    output_path: str | Path | None = None,
    on_epoch: Callable[[int, float], None] | None = None,
) -> NRRModel:
    """
    Train a ranker on SemEval-style ranking data (``rank``) or on labelled
    paraphrase rules (``ppdb``).

    Example:
        >>> model = train_model("rank", "train.tsv", ResourcePaths.resolve("res/"), TrainConfig())
    """
    if task not in TASKS:
        raise ValueError(f"Unknown task '{task}'. Known: {list(TASKS)}")
    with _library_errors():
        schema = default_schema(task, groups)
        extractor = make_extractor(paths, schema, lemmatizer)
        if task == "rank":
            pairs, labels = ranking_training_set(
                read_ranking_instances(data_path), extractor, use_context
            )
        else:
            pairs, labels = rule_training_set(read_labelled_rules(data_path), extractor)
        model = train_nrr(pairs, labels, schema, config, task, on_epoch)
        if output_path is not None:
            save_model(model, output_path)
        return model


def _predictor_and_extractor(
    model_path: str | Path, paths: ResourcePaths, lemmatizer: str
) -> tuple[NRRPredictor, PhraseFeatureExtractor]:
    predictor = NRRPredictor(model_path)
    return predictor, make_extractor(paths, predictor.schema, lemmatizer)


def run_rank(
    model_path: str | Path,
    data_path: str | Path,
    paths: ResourcePaths,
    use_context: bool = True,
    lemmatizer: str = "suffix",
) -> Iterator[tuple[int, RankingInstance, list[RankedCandidate]]]:
    """
    Rank the candidates of every instance, simplest first.

    Yields:
        (instance index, instance, ranked candidates), in file order.
    """
    with _library_errors():
        predictor, extractor = _predictor_and_extractor(model_path, paths, lemmatizer)
        for index, instance in enumerate(read_ranking_instances(data_path)):
            yield index, instance, rank_candidates(predictor, instance, extractor, use_context)


def run_classify_rules(
    model_path: str | Path,
    rules_path: str | Path,
    paths: ResourcePaths,
    thresholds: RuleThresholds = RuleThresholds(),
    lemmatizer: str = "suffix",
) -> list[ParaphraseRule]:
    """Score and classify labelled rules or PPDB lines."""
    with _library_errors():
        predictor, extractor = _predictor_and_extractor(model_path, paths, lemmatizer)
        return score_rules(predictor, read_rules(rules_path), extractor, thresholds)


def run_rule_cross_validation(
    rules_path: str | Path,
    paths: ResourcePaths,
    config: TrainConfig,
    k: int = 10,
    thresholds: RuleThresholds = RuleThresholds(),
    groups: Sequence[str] | None = None,
    lemmatizer: str = "suffix",
    on_fold: Callable[[int], None] | None = None,
) -> EvalReport:
    with _library_errors():
        extractor = make_extractor(paths, default_schema("ppdb", groups), lemmatizer)
        return cross_validate_rules(
            read_labelled_rules(rules_path), extractor, config, k, thresholds, on_fold
        )


def run_build_simpleppdb(
    model_path: str | Path,
    rules_path: str | Path,
    output_path: str | Path,
    paths: ResourcePaths,
    jobs: int = 1,
    chunk_size: int = 1000,
    thresholds: RuleThresholds = RuleThresholds(),
    lemmatizer: str = "suffix",
    on_progress: Callable[[int], None] | None = None,
) -> BuildStats:
    with _library_errors():
        predictor, extractor = _predictor_and_extractor(model_path, paths, lemmatizer)
        return build_simpleppdb(
            predictor,
            extractor,
            rules_path,
            output_path,
            jobs=jobs,
            chunk_size=chunk_size,
            thresholds=thresholds,
            on_progress=on_progress,
        )


def run_generate(
    simpleppdb_path: str | Path,
    targets: Sequence[tuple[str, str | None]],
    only_simplifying: bool = False,
) -> Iterator[tuple[str, list[Substitution]]]:
    """
    Substitutions for each (target, category) from a scored SimplePPDB++ file.
    A category of None accepts rules of any category.
    """
    with _library_errors():
        wanted = {target.strip().lower() for target, _ in targets}
        by_source: dict[str, list[ParaphraseRule]] = {}
        for rule in read_simpleppdb(simpleppdb_path):
            key = rule.source.strip().lower()
            if key in wanted:
                by_source.setdefault(key, []).append(rule)
        for target, category in targets:
            rules = by_source.get(target.strip().lower(), [])
            yield target, generate_substitutions(
                target, rules, category=category, only_simplifying=only_simplifying
            )


def load_cwi_resources(
    paths: ResourcePaths,
    features: Sequence[str],
    wordnet: bool = False,
    tagger: str = "rule",
    lemmatizer: str = "suffix",
) -> CWIResources:
    resources = CWIResources(
        tagger=NLTKTagger() if tagger == "nltk" else RuleBasedTagger(),
        lemmatizer=make_lemmatizer(lemmatizer),
    )
    for name in features:
        attribute = CWIResources.REQUIRED.get(name)
        if attribute is None or getattr(resources, attribute) is not None:
            continue
        if attribute == "senses":
            resources.senses = (
                WordNetSenseInventory()
                if wordnet
                else CountSenseInventory(load_frequency_table(paths.require("senses", name)))
            )
        else:
            setattr(resources, attribute, _LOADERS[attribute](paths.require(attribute, name)))
    return resources


def run_cwi(
    train_path: str | Path,
    test_path: str | Path,
    paths: ResourcePaths,
    method: str = "wc-only",
    with_wc: bool = False,
    features: Sequence[str] = CWI_FEATURES,
    wordnet: bool = False,
    tagger: str = "rule",
    layout: str = "auto",
    lemmatizer: str = "suffix",
) -> tuple[list, list[int], EvalReport]:
    """
    Train a CWI classifier and label the test instances.

    Returns:
        (test instances, predicted labels, report against the test labels)
    """
    if method not in ("wc-only", "nearest-centroid"):
        raise ValueError(f"Unknown CWI method '{method}'")
    with _library_errors():
        train = read_cwi(train_path, layout)
        test = read_cwi(test_path, layout)
        if method == "wc-only":
            lexicon = load_lexicon(paths.require("lexicon", "wc-only"))
            classifier = cwi_wc_only(train, lexicon, make_lemmatizer(lemmatizer))
        else:
            names = list(features) + (["lex_present", "lex_score"] if with_wc else [])
            resources = load_cwi_resources(paths, names, wordnet, tagger, lemmatizer)
            classifier = cwi_nearest_centroid(train, resources, features, with_wc)
        predictions = classifier.predict(test)
        return test, predictions, evaluate_cwi(predictions, test)


def _evaluate_rank(predictions_path, gold_path, baseline_path, n_resamples, seed) -> EvalReport:
    gold = [instance.gold for instance in read_ranking_instances(gold_path)]

    def rankings(path) -> list[list[str]]:
        by_index = {int(key): candidates for key, candidates in read_candidate_lists(path)}
        missing = [i for i in range(len(gold)) if i not in by_index]
        if missing:
            raise ValueError(f"{path} has no ranking for instance(s) {missing[:5]}")
        return [by_index[i] for i in range(len(gold))]

    predicted = rankings(predictions_path)
    metrics = {
        "precision@1": precision_at_1(predicted, gold),
        "pearson": ranking_pearson(predicted, gold),
    }
    if baseline_path is not None:
        metrics["bootstrap_p"] = paired_bootstrap(
            gold, predicted, rankings(baseline_path),
            lambda p, g: precision_at_1(p, g), n_resamples, seed,
        )
    return EvalReport("rank", metrics, len(gold))


def _evaluate_ppdb(predictions_path, gold_path) -> EvalReport:
    predicted = {
        (rule.source, rule.target): rule.predicted for rule in read_simpleppdb(predictions_path)
    }
    gold_rules = read_labelled_rules(gold_path)
    missing = [r for r in gold_rules if (r.source, r.target) not in predicted]
    if missing:
        raise ValueError(
            f"{len(missing)} gold rules have no prediction "
            f"(first: {missing[0].source} -> {missing[0].target})"
        )
    report = class_precisions(
        [int(predicted[(r.source, r.target)]) for r in gold_rules],
        [int(r.label) for r in gold_rules],
        classes=[int(c) for c in RuleClass],
        positive=int(RuleClass.SIMPLIFYING),
    )
    return EvalReport(
        "ppdb",
        {"accuracy": report.accuracy},
        report.n,
        per_class={
            c.label: {"precision": report.precision[int(c)]} for c in RuleClass
        },
    )


def _evaluate_generate(predictions_path, gold_path) -> EvalReport:
    gold = {target.lower(): {c.lower() for c in good} for target, good in read_candidate_lists(gold_path)}
    relevance = []
    for target, candidates in read_candidate_lists(predictions_path):
        good = gold.get(target.lower())
        if good is None:
            logger.debug(f"No gold substitutions for '{target}'; skipped")
            continue
        relevance.append([c.lower() in good for c in candidates])
    score = score_generated_lists(relevance)
    return EvalReport(
        "generate",
        {
            "map": score.map,
            "precision@1": score.precision_at_1,
            "mean_candidates": score.mean_length,
            "excluded": float(score.excluded),
        },
        score.evaluated,
    )


def evaluate(
    task: str,
    predictions_path: str | Path,
    gold_path: str | Path,
    baseline_path: str | Path | None = None,
    n_resamples: int = 10_000,
    seed: int = 0,
    cwi_layout: str = "auto",
) -> EvalReport:
    """
    Score a predictions file written by the ``rank``, ``classify-ppdb``,
    ``generate`` or ``cwi`` commands against its gold file.

    Args:
        baseline_path: Second ranking file for a paired bootstrap test of P@1
            (ranking only).
    """
    with _library_errors():
        match task:
            case "rank":
                return _evaluate_rank(predictions_path, gold_path, baseline_path, n_resamples, seed)
            case "ppdb":
                return _evaluate_ppdb(predictions_path, gold_path)
            case "generate":
                return _evaluate_generate(predictions_path, gold_path)
            case "cwi":
                return evaluate_cwi(read_labels(predictions_path), read_cwi(gold_path, cwi_layout))
            case _:
                raise ValueError(f"Unknown evaluation task '{task}'")


def run_gradient_check(seed: int = 0, draws: int = 100) -> GradientCheckResult:
    with _library_errors():
        return gradient_check(seed, draws)
