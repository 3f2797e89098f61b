from .cwi import (
    COMPLEX,
    CWI_FEATURES,
    POS_TAGS,
    SIMPLE,
    WC_FEATURES,
    CentroidCWIClassifier,
    CountSenseInventory,
    CWIResources,
    NearestCentroidClassifier,
    NLTKTagger,
    POSTagger,
    RuleBasedTagger,
    SenseInventory,
    WCThresholdClassifier,
    WordNetSenseInventory,
    cwi_feature_frame,
    cwi_nearest_centroid,
    cwi_wc_only,
    evaluate_cwi,
)
from .datasets import (
    PPDB_COLUMNS,
    CWIInstance,
    ParaphraseRule,
    RankingInstance,
    RuleClass,
    parse_ppdb_line,
    read_cwi,
    read_rules,
    read_candidate_lists,
    read_labels,
    read_labelled_rules,
    read_ppdb_rules,
    read_ranking_instances,
    read_simpleppdb,
)
from .paraphrase import (
    QUALITY_PHRASE,
    QUALITY_WORD,
    RuleThresholds,
    Substitution,
    classify_rule,
    classify_score,
    cross_validate_rules,
    generate_substitutions,
    rule_training_set,
    score_rules,
    select_symmetric_threshold,
    vocabulary_disjoint_folds,
)
from .ranking import (
    RankedCandidate,
    RankingPair,
    aggregate_scores,
    build_ranking_pairs,
    rank_candidates,
    ranking_training_set,
)
from .simpleppdb import BuildStats, build_simpleppdb, format_row

__all__ = [
    "COMPLEX",
    "CWI_FEATURES",
    "POS_TAGS",
    "SIMPLE",
    "WC_FEATURES",
    "CentroidCWIClassifier",
    "CountSenseInventory",
    "CWIResources",
    "NearestCentroidClassifier",
    "NLTKTagger",
    "POSTagger",
    "RuleBasedTagger",
    "SenseInventory",
    "WCThresholdClassifier",
    "WordNetSenseInventory",
    "cwi_feature_frame",
    "cwi_nearest_centroid",
    "cwi_wc_only",
    "evaluate_cwi",
    "PPDB_COLUMNS",
    "CWIInstance",
    "ParaphraseRule",
    "RankingInstance",
    "RuleClass",
    "parse_ppdb_line",
    "read_cwi",
    "read_rules",
    "read_candidate_lists",
    "read_labels",
    "read_labelled_rules",
    "read_ppdb_rules",
    "read_ranking_instances",
    "read_simpleppdb",
    "QUALITY_PHRASE",
    "QUALITY_WORD",
    "RuleThresholds",
    "Substitution",
    "classify_rule",
    "classify_score",
    "cross_validate_rules",
    "generate_substitutions",
    "rule_training_set",
    "score_rules",
    "select_symmetric_threshold",
    "vocabulary_disjoint_folds",
    "RankedCandidate",
    "RankingPair",
    "aggregate_scores",
    "build_ranking_pairs",
    "rank_candidates",
    "ranking_training_set",
    "BuildStats",
    "build_simpleppdb",
    "format_row",
]
