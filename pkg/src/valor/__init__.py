"""Co-occurrence-driven benchmark construction and agent-based caption scoring."""

from .agent import (
    Agent,
    AgentRequest,
    AgentResponse,
    AgentTransportError,
    DecodingParams,
    PayloadError,
    RemoteBackend,
    ReplayBackend,
    ReplayMissError,
    ResponseCache,
    cache_key,
    parse_payload,
    write_fixture,
)
from .cooccur import (
    FrequencyTable,
    Kind,
    SelectionSets,
    Statistic,
    collect_candidates,
    conditional_probability,
    count_frequencies,
    run_selection,
    select_head_objects,
    select_rare_features,
    select_strong_features,
    skew_metrics,
)
from .corpus import (
    CANONICAL_PROMPTS,
    AnnotatedImage,
    AttributeObjectFeature,
    BenchmarkItem,
    CaptionRecord,
    Category,
    ComparativeFeature,
    CountFeature,
    Feature,
    HumanJudgment,
    ImageSource,
    LoadError,
    ObjectFeature,
    ObjectInstance,
    PeopleAttributeFeature,
    PositionalFeature,
    ValidationReport,
    bundled_benchmark_path,
    category_counts,
    load_benchmark,
    load_captions,
    load_judgments,
    load_scene_graph,
    singularize,
    validate_benchmark,
)
from .features import (
    ExtractedFeatureSet,
    MatchResult,
    MatchShapeError,
    comparative_pairs,
    expand_comparative,
    extract_features,
    match_features,
    render_extraction_prompt,
    render_matching_prompt,
    validate_match,
)
from .metrics import (
    ChairResult,
    ItemScore,
    SynonymTable,
    acc_c,
    acc_f,
    aggregate,
    caption_to_vocab_words,
    chair_scores,
    coverage,
    faithfulness,
    pearson,
    render_report_table,
    round_half_up,
    score_pair,
)

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "AgentRequest",
    "AgentResponse",
    "AgentTransportError",
    "AnnotatedImage",
    "AttributeObjectFeature",
    "BenchmarkItem",
    "CANONICAL_PROMPTS",
    "CaptionRecord",
    "Category",
    "ChairResult",
    "ComparativeFeature",
    "CountFeature",
    "DecodingParams",
    "ExtractedFeatureSet",
    "Feature",
    "FrequencyTable",
    "HumanJudgment",
    "ImageSource",
    "ItemScore",
    "Kind",
    "LoadError",
    "MatchResult",
    "MatchShapeError",
    "ObjectFeature",
    "ObjectInstance",
    "PayloadError",
    "PeopleAttributeFeature",
    "PositionalFeature",
    "RemoteBackend",
    "ReplayBackend",
    "ReplayMissError",
    "ResponseCache",
    "SelectionSets",
    "Statistic",
    "SynonymTable",
    "ValidationReport",
    "acc_c",
    "acc_f",
    "aggregate",
    "bundled_benchmark_path",
    "cache_key",
    "caption_to_vocab_words",
    "category_counts",
    "chair_scores",
    "collect_candidates",
    "comparative_pairs",
    "conditional_probability",
    "count_frequencies",
    "coverage",
    "expand_comparative",
    "extract_features",
    "faithfulness",
    "load_benchmark",
    "load_captions",
    "load_judgments",
    "load_scene_graph",
    "match_features",
    "parse_payload",
    "pearson",
    "render_extraction_prompt",
    "render_matching_prompt",
    "render_report_table",
    "round_half_up",
    "run_selection",
    "score_pair",
    "select_head_objects",
    "select_rare_features",
    "select_strong_features",
    "singularize",
    "skew_metrics",
    "validate_benchmark",
    "validate_match",
    "write_fixture",
]
