"""Type-aware surface similarity plus the baseline flattened-ANLS metric."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional

_WHITESPACE_RUN = re.compile(r"\s+")


class AnswerType(enum.Enum):
    NUMERIC = "numeric"
    TEXTUAL = "textual"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class SimilarityConfig:
    num_weight: float = 10.0
    str_weight: float = 1.0
    anls_threshold: float = 0.5
    # Scale factors tolerated by the numeric match, tried in both directions
    # (percentages, thousands separators dropped, millions/billions units).
    scale_factors: tuple[int, ...] = (100, 1000, 10**6, 10**9)
    lowercase: bool = True
    collapse_whitespace: bool = True

    def __post_init__(self):
        if self.num_weight <= 0 or self.str_weight <= 0:
            raise ValueError("harmonic weights must be positive")
        if not (0.0 <= self.anls_threshold <= 1.0):
            raise ValueError("anls_threshold must lie in [0, 1]")


@dataclass(frozen=True)
class MatchScore:
    value: float
    answer_type: AnswerType
    num_score: Optional[float] = None
    str_score: Optional[float] = None
    empty_prediction: bool = False


DEFAULT_CONFIG = SimilarityConfig()


def normalize_text(s: str, config: SimilarityConfig = DEFAULT_CONFIG) -> str:
    if config.lowercase:
        s = s.lower()
    if config.collapse_whitespace:
        s = _WHITESPACE_RUN.sub(" ", s).strip()
    return s


def levenshtein(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    # Strip common prefix/suffix; keeps the DP small for near-matches.
    start = 0
    end_a, end_b = len(a), len(b)
    while start < end_a and start < end_b and a[start] == b[start]:
        start += 1
    while end_a > start and end_b > start and a[end_a - 1] == b[end_b - 1]:
        end_a -= 1
        end_b -= 1
    a, b = a[start:end_a], b[start:end_b]
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        append = current.append
        prev_diag = previous[0]
        for j, cb in enumerate(b, start=1):
            prev_row = previous[j]
            cost = min(prev_row + 1, current[j - 1] + 1,
                       prev_diag + (ca != cb))
            append(cost)
            prev_diag = prev_row
        previous = current
    return previous[-1]


def nls(a: str, b: str, config: SimilarityConfig = DEFAULT_CONFIG) -> float:
    """Normalized Levenshtein similarity over normalized strings, in [0, 1].

    Both strings empty (after normalization) scores 1.0.
    """
    a_norm = normalize_text(a, config)
    b_norm = normalize_text(b, config)
    if not a_norm and not b_norm:
        return 1.0
    max_len = max(len(a_norm), len(b_norm))
    return 1.0 - levenshtein(a_norm, b_norm) / max_len


def anls_flattened(
    a: str,
    b: str,
    threshold: Optional[float] = None,
    config: SimilarityConfig = DEFAULT_CONFIG,
) -> float:
    """Baseline ANLS per-pair score: NLS flattened to zero below the threshold."""
    if threshold is None:
        threshold = config.anls_threshold
    if not (0.0 <= threshold <= 1.0):
        raise ValueError("threshold must lie in [0, 1]")
    score = nls(a, b, config)
    return 0.0 if score < threshold else score


_DIGITS = frozenset("0123456789")


def classify_answer_type(s: str) -> AnswerType:
    """Numeric if all digits, textual if all alphabetic, otherwise hybrid.

    Whitespace is ignored for classification.
    """
    chars = [c for c in s if not c.isspace()]
    if not chars:
        raise ValueError("empty answer")
    if all(c in _DIGITS for c in chars):
        return AnswerType.NUMERIC
    if all(c.isalpha() for c in chars):
        return AnswerType.TEXTUAL
    return AnswerType.HYBRID


def split_hybrid(s: str, config: SimilarityConfig = DEFAULT_CONFIG) -> tuple[str, str]:
    """Split into (digit characters in order, remaining characters in order)."""
    num_part = "".join(c for c in s if c in _DIGITS)
    str_part = "".join(c for c in s if c not in _DIGITS)
    return num_part, _WHITESPACE_RUN.sub(" ", str_part).strip()


def numeric_match(
    a: str, t: str, scales: tuple[int, ...] = DEFAULT_CONFIG.scale_factors
) -> float:
    """1.0 if the digit strings denote equal integers, possibly after scaling
    either side by an allowed factor; else 0.0."""
    for s, name in ((a, "a"), (t, "t")):
        if not s or any(c not in _DIGITS for c in s):
            raise ValueError(f"numeric_match argument {name}={s!r} is not a digit string")
    x, y = int(a), int(t)
    if x == y:
        return 1.0
    for k in scales:
        if x == y * k or y == x * k:
            return 1.0
    return 0.0


def _digits_of(s: str) -> str:
    return "".join(c for c in s if c in _DIGITS)


def match_score(
    pred: str, gt: str, config: SimilarityConfig = DEFAULT_CONFIG
) -> MatchScore:
    """Score a prediction against one ground-truth variant, by the variant's type."""
    if not gt.strip():
        raise ValueError("ground-truth answer must be non-empty")
    answer_type = classify_answer_type(gt)
    if not pred.strip():
        return MatchScore(0.0, answer_type, empty_prediction=True)

    if answer_type is AnswerType.TEXTUAL:
        return MatchScore(nls(pred, gt, config), answer_type)

    if answer_type is AnswerType.NUMERIC:
        pred_digits = _digits_of(pred)
        gt_digits = _digits_of(gt)
        if not pred_digits:
            return MatchScore(0.0, answer_type, num_score=0.0)
        score = numeric_match(pred_digits, gt_digits, config.scale_factors)
        return MatchScore(score, answer_type, num_score=score)

    gt_num, gt_str = split_hybrid(gt, config)
    pred_num, pred_str = split_hybrid(pred, config)
    if pred_num and gt_num:
        num_score = numeric_match(pred_num, gt_num, config.scale_factors)
    else:
        num_score = 1.0 if pred_num == gt_num else 0.0
    str_score = nls(pred_str, gt_str, config)
    if num_score == 0.0 or str_score == 0.0:
        # Limit of the harmonic mean as either subscore goes to zero.
        value = 0.0
    else:
        w_n, w_s = config.num_weight, config.str_weight
        value = (w_n + w_s) / (w_n / num_score + w_s / str_score)
    return MatchScore(value, answer_type, num_score=num_score, str_score=str_score)
