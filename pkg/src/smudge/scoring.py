"""Composite scoring: blend surface match and grounding, aggregate datasets."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Optional

from .document_model import DocumentLayout, Prediction, QASample
from .grounding import GroundingConfig, GroundingResult, LocatedSpan, ground
from .ingest import DatasetBundle, PredictionRun
from .similarity import AnswerType, SimilarityConfig, anls_flattened, match_score

DEFAULT_ALPHA_GRID = tuple(round(i * 0.05, 2) for i in range(21))


@dataclass(frozen=True)
class ScoreConfig:
    alpha: float = 0.25
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    grounding: GroundingConfig = field(default_factory=GroundingConfig)

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha {self.alpha} outside [0, 1]")


@dataclass(frozen=True)
class ScoredSample:
    qid: str
    gt_variant: str
    m: float
    g: float
    d: float
    s: float
    anls: float
    answer_type: Optional[AnswerType]
    hallucinated: bool
    missing: bool
    empty_prediction: bool
    gt_span: Optional[LocatedSpan] = None
    pred_span: Optional[LocatedSpan] = None

    def as_row(self) -> dict:
        return {
            "qid": self.qid,
            "gt_variant": self.gt_variant,
            "m": self.m,
            "g": self.g,
            "d": self.d,
            "s": self.s,
            "anls": self.anls,
            "answer_type": self.answer_type.value if self.answer_type else None,
            "hallucinated": self.hallucinated,
            "missing": self.missing,
            "empty_prediction": self.empty_prediction,
        }


@dataclass(frozen=True)
class DatasetReport:
    samples: tuple[ScoredSample, ...]
    aggregates: dict
    breakdowns: dict
    config: ScoreConfig
    unmatched_gt_qids: tuple[str, ...] = ()
    unmatched_pred_qids: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "aggregates": self.aggregates,
            "breakdowns": self.breakdowns,
            "unmatched_gt_qids": list(self.unmatched_gt_qids),
            "unmatched_pred_qids": list(self.unmatched_pred_qids),
            "samples": [s.as_row() for s in self.samples],
        }


def composite(m: float, g: float, alpha: float) -> float:
    """Weighted blend of match and grounding: alpha*m + (1-alpha)*g."""
    for name, value in (("m", m), ("g", g), ("alpha", alpha)):
        if not (0.0 <= value <= 1.0):
            raise ValueError(f"{name}={value} outside [0, 1]")
    return alpha * m + (1.0 - alpha) * g


def score_sample(
    sample: QASample,
    pred: Optional[Prediction],
    doc: DocumentLayout,
    config: ScoreConfig = ScoreConfig(),
) -> ScoredSample:
    """Score one prediction against a sample, maximizing the composite jointly
    over ground-truth variants (m and g always come from the same variant)."""
    if doc.doc_id != sample.doc_id:
        raise ValueError(
            f"sample {sample.qid} expects document {sample.doc_id!r}, got {doc.doc_id!r}"
        )
    if pred is None:
        return ScoredSample(
            qid=sample.qid, gt_variant=sample.answers[0], m=0.0, g=0.0, d=1.0,
            s=0.0, anls=0.0, answer_type=None, hallucinated=False, missing=True,
            empty_prediction=False,
        )

    best = None  # (s, m, grounding, variant, match)
    anls = 0.0
    for variant in sample.answers:
        match = match_score(pred.answer, variant, config.similarity)
        grounding = ground(pred.answer, variant, doc, config.grounding,
                           config.similarity)
        s = composite(match.value, grounding.score, config.alpha)
        anls = max(anls, anls_flattened(pred.answer, variant,
                                        config=config.similarity))
        if best is None or s > best[0]:
            best = (s, match.value, grounding, variant, match)

    s, m, grounding, variant, match = best
    return ScoredSample(
        qid=sample.qid,
        gt_variant=variant,
        m=m,
        g=grounding.score,
        d=grounding.distance,
        s=s,
        anls=anls,
        answer_type=match.answer_type,
        hallucinated=grounding.hallucinated,
        missing=False,
        empty_prediction=match.empty_prediction,
        gt_span=grounding.gt_span,
        pred_span=grounding.pred_span,
    )


def _thread_count() -> int:
    env = os.environ.get("SMUDGE_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def _aggregate(samples) -> dict:
    return {
        "count": len(samples),
        "s": _mean(x.s for x in samples),
        "m": _mean(x.m for x in samples),
        "g": _mean(x.g for x in samples),
        "anls": _mean(x.anls for x in samples),
        "hallucinated": sum(1 for x in samples if x.hallucinated),
        "missing": sum(1 for x in samples if x.missing),
    }


def score_dataset(
    bundle: DatasetBundle,
    run: PredictionRun,
    config: ScoreConfig = ScoreConfig(),
    threads: Optional[int] = None,
) -> DatasetReport:
    """Score every qid present in the ground truth; missing predictions score
    zero and are flagged. Output ordering and aggregates are deterministic."""
    joined = [s for s in bundle.samples if s.qid in run.predictions]
    if not joined:
        raise ValueError("no qids shared between ground truth and predictions")
    gt_qids = {s.qid for s in bundle.samples}
    unmatched_pred = tuple(sorted(set(run.predictions) - gt_qids))

    samples = sorted(bundle.samples, key=lambda s: s.qid)

    def work(sample: QASample) -> ScoredSample:
        return score_sample(sample, run.predictions.get(sample.qid),
                            bundle.documents[sample.doc_id], config)

    n_threads = threads if threads is not None else _thread_count()
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            scored = list(pool.map(work, samples))
    else:
        scored = [work(s) for s in samples]

    by_answer_type = {}
    by_question_type = {}
    lookup = {s.qid: s for s in bundle.samples}
    for row in scored:
        atype = row.answer_type.value if row.answer_type else "missing"
        by_answer_type.setdefault(atype, []).append(row)
        qtype = lookup[row.qid].question_type
        if qtype is not None:
            by_question_type.setdefault(qtype, []).append(row)

    breakdowns = {
        "answer_type": {k: _aggregate(v) for k, v in sorted(by_answer_type.items())},
    }
    if by_question_type:
        breakdowns["question_type"] = {
            k: _aggregate(v) for k, v in sorted(by_question_type.items())
        }

    missing_qids = tuple(sorted(gt_qids - set(run.predictions)))
    return DatasetReport(
        samples=tuple(scored),
        aggregates=_aggregate(scored),
        breakdowns=breakdowns,
        config=config,
        unmatched_gt_qids=missing_qids,
        unmatched_pred_qids=unmatched_pred,
    )


def alpha_sweep(
    bundle: DatasetBundle,
    run: PredictionRun,
    config: ScoreConfig = ScoreConfig(),
    grid: tuple[float, ...] = DEFAULT_ALPHA_GRID,
    threads: Optional[int] = None,
) -> list[tuple[float, float]]:
    """Aggregate composite score at each alpha; per-sample m and g are computed
    once at the configured alpha and recombined linearly."""
    if not grid:
        raise ValueError("alpha grid must be non-empty")
    for alpha in grid:
        if not (0.0 <= alpha <= 1.0):
            raise ValueError(f"grid alpha {alpha} outside [0, 1]")
    report = score_dataset(bundle, run, config, threads=threads)
    pairs = [(row.m, row.g) for row in report.samples]
    return [
        (alpha, _mean(alpha * m + (1.0 - alpha) * g for m, g in pairs))
        for alpha in grid
    ]
