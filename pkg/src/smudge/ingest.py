"""Loaders for the canonical OCR, ground-truth, and prediction file formats."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .document_model import (
    BBox,
    DocumentLayout,
    Page,
    Prediction,
    QASample,
    Segment,
    Word,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class SchemaError(ValueError):
    """A file fails validation against its canonical schema."""


@dataclass(frozen=True)
class DatasetBundle:
    documents: dict[str, DocumentLayout]
    samples: tuple[QASample, ...]
    dataset: Optional[str] = None

    def __post_init__(self):
        qids = [s.qid for s in self.samples]
        if len(set(qids)) != len(qids):
            dupes = sorted({q for q in qids if qids.count(q) > 1})
            raise SchemaError(f"duplicate qids in bundle: {dupes}")
        for sample in self.samples:
            if sample.doc_id not in self.documents:
                raise SchemaError(
                    f"sample {sample.qid} references unknown document {sample.doc_id!r}"
                )


@dataclass(frozen=True)
class PredictionRun:
    name: str
    predictions: dict[str, Prediction] = field(default_factory=dict)


def _require(mapping, key, context):
    if key not in mapping:
        raise SchemaError(f"{context}: missing field {key!r}")
    return mapping[key]


def _load_json(path: PathLike):
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _clamp(value, low, high):
    return min(max(value, low), high)


def load_ocr(path: PathLike) -> DocumentLayout:
    """Parse a canonical OCR file into a DocumentLayout.

    Normalized coordinates are scaled by page extent; boxes straying off the
    page are clamped to its bounds. Empty segments are dropped with a warning.
    """
    raw = _load_json(path)
    doc_id = _require(raw, "doc_id", str(path))
    coords = _require(raw, "coords", str(path))
    if coords not in ("pixels", "normalized"):
        raise SchemaError(f"{path}: coords must be 'pixels' or 'normalized', got {coords!r}")
    pages = []
    for p_idx, page_raw in enumerate(_require(raw, "pages", str(path))):
        ctx = f"{path}: pages[{p_idx}]"
        width = _require(page_raw, "width", ctx)
        height = _require(page_raw, "height", ctx)
        page_num = _require(page_raw, "page_num", ctx)
        if width <= 0 or height <= 0:
            raise SchemaError(f"{ctx}: non-positive page extent {width}x{height}")
        segments = []
        for s_idx, seg_raw in enumerate(_require(page_raw, "segments", ctx)):
            words = []
            for w_idx, word_raw in enumerate(_require(seg_raw, "words", f"{ctx}.segments[{s_idx}]")):
                wctx = f"{ctx}.segments[{s_idx}].words[{w_idx}]"
                text = _require(word_raw, "text", wctx)
                box = _require(word_raw, "bbox", wctx)
                if len(box) != 4:
                    raise SchemaError(f"{wctx}: bbox must have 4 coordinates")
                left, top, right, bottom = (float(v) for v in box)
                if coords == "normalized":
                    left, right = left * width, right * width
                    top, bottom = top * height, bottom * height
                words.append(
                    Word(
                        text=text,
                        bbox=BBox(
                            left=_clamp(left, 0.0, width),
                            top=_clamp(top, 0.0, height),
                            right=_clamp(right, 0.0, width),
                            bottom=_clamp(bottom, 0.0, height),
                        ),
                    )
                )
            if not words:
                logger.warning("%s: dropping empty segment %d on page %s",
                               path, s_idx, page_num)
                continue
            segments.append(Segment(words=tuple(words)))
        pages.append(Page(page_num=page_num, width=float(width),
                          height=float(height), segments=tuple(segments)))
    pages.sort(key=lambda p: p.page_num)
    return DocumentLayout(doc_id=doc_id, pages=tuple(pages))


def dump_ocr(doc: DocumentLayout) -> dict:
    """Serialize a layout back to the canonical OCR structure (pixel coords)."""
    return {
        "doc_id": doc.doc_id,
        "coords": "pixels",
        "pages": [
            {
                "page_num": page.page_num,
                "width": page.width,
                "height": page.height,
                "segments": [
                    {"words": [{"text": w.text, "bbox": w.bbox.as_list()}
                               for w in seg.words]}
                    for seg in page.segments
                ],
            }
            for page in doc.pages
        ],
    }


def load_ground_truth(path: PathLike) -> tuple[list[QASample], Optional[str]]:
    """Parse a ground-truth file into QA samples plus the dataset name."""
    raw = _load_json(path)
    samples = []
    seen = set()
    for idx, s_raw in enumerate(_require(raw, "samples", str(path))):
        ctx = f"{path}: samples[{idx}]"
        qid = _require(s_raw, "qid", ctx)
        if qid in seen:
            raise SchemaError(f"{path}: duplicate qid {qid!r}")
        seen.add(qid)
        answers = _require(s_raw, "answers", ctx)
        if not answers or any(not a.strip() for a in answers):
            raise SchemaError(f"{path}: sample {qid!r} has empty answers")
        samples.append(
            QASample(
                qid=qid,
                doc_id=_require(s_raw, "doc_id", ctx),
                question=_require(s_raw, "question", ctx),
                answers=tuple(answers),
                question_type=s_raw.get("question_type"),
                answer_page=s_raw.get("answer_page"),
            )
        )
    return samples, raw.get("dataset")


def load_predictions(path: PathLike) -> PredictionRun:
    """Parse a prediction file into a run keyed by qid."""
    raw = _load_json(path)
    name = _require(raw, "model", str(path))
    predictions: dict[str, Prediction] = {}
    for idx, p_raw in enumerate(_require(raw, "predictions", str(path))):
        ctx = f"{path}: predictions[{idx}]"
        qid = _require(p_raw, "qid", ctx)
        if qid in predictions:
            raise SchemaError(f"{path}: duplicate prediction for qid {qid!r}")
        confidence = p_raw.get("confidence")
        if confidence is not None and not (0.0 <= confidence <= 1.0):
            raise SchemaError(f"{ctx}: confidence {confidence} outside [0, 1]")
        predictions[qid] = Prediction(
            qid=qid, answer=_require(p_raw, "answer", ctx), confidence=confidence
        )
    return PredictionRun(name=name, predictions=predictions)


def load_bundle(gt_path: PathLike, ocr_paths: list[PathLike]) -> DatasetBundle:
    """Assemble ground truth and OCR layouts into a validated bundle."""
    samples, dataset = load_ground_truth(gt_path)
    documents = {}
    for ocr_path in ocr_paths:
        doc = load_ocr(ocr_path)
        if doc.doc_id in documents:
            raise SchemaError(f"duplicate doc_id {doc.doc_id!r} in OCR inputs")
        documents[doc.doc_id] = doc
    return DatasetBundle(documents=documents, samples=tuple(samples), dataset=dataset)


def load_bundle_dir(gt_path: PathLike, ocr_dir: PathLike) -> DatasetBundle:
    ocr_paths = sorted(Path(ocr_dir).glob("*.json"))
    return load_bundle(gt_path, list(ocr_paths))
