"""Core immutable data types: bounding boxes, words, segments, pages, QA samples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in page-pixel coordinates, origin at the top-left."""

    left: float
    top: float
    right: float
    bottom: float

    def __post_init__(self):
        for name in ("left", "top", "right", "bottom"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"non-finite bbox coordinate {name}={value!r}")
        if self.left > self.right:
            raise ValueError(f"bbox left {self.left} > right {self.right}")
        if self.top > self.bottom:
            raise ValueError(f"bbox top {self.top} > bottom {self.bottom}")

    def as_list(self) -> list[float]:
        return [self.left, self.top, self.right, self.bottom]


def centroid(box: BBox) -> tuple[float, float]:
    """Center point of a box; defined even for zero-area boxes."""
    return ((box.left + box.right) / 2.0, (box.top + box.bottom) / 2.0)


def merge_bboxes(boxes: list[BBox]) -> BBox:
    """Smallest box containing every input box (corner-wise min/max)."""
    if not boxes:
        raise ValueError("empty box sequence")
    return BBox(
        left=min(b.left for b in boxes),
        top=min(b.top for b in boxes),
        right=max(b.right for b in boxes),
        bottom=max(b.bottom for b in boxes),
    )


@dataclass(frozen=True)
class Word:
    text: str
    bbox: BBox

    def __post_init__(self):
        if not self.text:
            raise ValueError("word text must be non-empty")
        if "\n" in self.text:
            raise ValueError("word text must not contain newlines")


@dataclass(frozen=True)
class Segment:
    """OCR-provided group of words in reading order (a line or semantic block)."""

    words: tuple[Word, ...]

    def __post_init__(self):
        if not self.words:
            raise ValueError("segment must contain at least one word")


@dataclass(frozen=True)
class Page:
    page_num: int
    width: float
    height: float
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"page {self.page_num} extent must be positive, "
                f"got {self.width}x{self.height}"
            )

    def iter_words(self):
        for seg_idx, segment in enumerate(self.segments):
            for word_idx, word in enumerate(segment.words):
                yield seg_idx, word_idx, word


@dataclass(frozen=True)
class DocumentLayout:
    doc_id: str
    pages: tuple[Page, ...]

    def __post_init__(self):
        nums = [p.page_num for p in self.pages]
        if sorted(set(nums)) != nums:
            raise ValueError(f"page numbers must be unique and ascending, got {nums}")

    @property
    def word_count(self) -> int:
        return sum(len(s.words) for p in self.pages for s in p.segments)


@dataclass(frozen=True)
class QASample:
    qid: str
    doc_id: str
    question: str
    answers: tuple[str, ...]
    question_type: Optional[str] = None
    answer_page: Optional[int] = None

    def __post_init__(self):
        if not self.answers:
            raise ValueError(f"sample {self.qid}: answers list must be non-empty")
        for answer in self.answers:
            if not answer.strip():
                raise ValueError(f"sample {self.qid}: blank ground-truth answer")


@dataclass(frozen=True)
class Prediction:
    qid: str
    answer: str
    confidence: Optional[float] = None

    def __post_init__(self):
        if self.confidence is not None and not (0.0 <= self.confidence <= 1.0):
            raise ValueError(
                f"prediction {self.qid}: confidence {self.confidence} outside [0, 1]"
            )
