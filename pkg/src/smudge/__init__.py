"""Grounding-aware scoring for Document VQA predictions."""

from .analysis import (
    kendall_tau,
    pearson_r,
    rank_scores,
    rerank_report,
    robustness_score,
    robustness_table,
    volatility,
)
from .document_model import (
    BBox,
    DocumentLayout,
    Page,
    Prediction,
    QASample,
    Segment,
    Word,
    centroid,
    merge_bboxes,
)
from .grounding import (
    GroundingConfig,
    GroundingResult,
    LocatedSpan,
    answer_distance,
    beta_walk,
    build_beta_skeleton,
    decay,
    ground,
    locate_beta_skeleton,
    locate_reading_order,
)
from .ingest import (
    DatasetBundle,
    PredictionRun,
    SchemaError,
    load_bundle,
    load_bundle_dir,
    load_ground_truth,
    load_ocr,
    load_predictions,
)
from .scoring import (
    DatasetReport,
    ScoreConfig,
    ScoredSample,
    alpha_sweep,
    composite,
    score_dataset,
    score_sample,
)
from .similarity import (
    AnswerType,
    MatchScore,
    SimilarityConfig,
    anls_flattened,
    classify_answer_type,
    match_score,
    nls,
    numeric_match,
    split_hybrid,
)

__version__ = "0.1.0"
