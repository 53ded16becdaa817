"""Rank statistics: Kendall's tau, Pearson-R, volatility, robustness, reranking."""

from __future__ import annotations

import functools
import logging
import math
import statistics
from dataclasses import dataclass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ranking:
    """Models ordered by score (descending); tied scores share the mean rank."""

    entries: tuple[tuple[str, float], ...]  # (model, score), sorted by score desc
    ranks: dict  # model -> 1-based rank (mean rank for ties)


@dataclass(frozen=True)
class RobustnessRecord:
    model: str
    rank_series: tuple[float, ...]
    volatility: float
    median_rank: float
    robustness: float


def rank_scores(scores: dict[str, float]) -> Ranking:
    """Assign 1-based ranks by descending score, mean rank for ties."""
    for model, score in scores.items():
        if not math.isfinite(score):
            raise ValueError(f"non-finite score for {model!r}")
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    ranks = {}
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j][1] == ordered[i][1]:
            j += 1
        mean_rank = (i + 1 + j) / 2.0
        for k in range(i, j):
            ranks[ordered[k][0]] = mean_rank
        i = j
    return Ranking(entries=tuple(ordered), ranks=ranks)


def _pair_stats(xs, ys):
    n = len(xs)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            if dx == 0 and dy == 0:
                ties_x += 1
                ties_y += 1
            elif dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    return concordant, discordant, ties_x, ties_y


@functools.lru_cache(maxsize=None)
def _inversion_count_distribution(n: int) -> tuple[int, ...]:
    # counts[k] = number of permutations of n items with exactly k inversions
    counts = [1]
    for m in range(2, n + 1):
        new = [0] * (len(counts) + m - 1)
        running = 0
        for k in range(len(new)):
            running += counts[k] if k < len(counts) else 0
            if k - m >= 0:
                running -= counts[k - m]
            new[k] = running
        counts = new
    return tuple(counts)


def kendall_tau(rank_a: dict[str, float], rank_b: dict[str, float]) -> tuple[float, float]:
    """Tie-corrected Kendall's tau-b with a two-tailed p-value.

    The p-value is exact (permutation null via the inversion-count
    distribution) for tie-free series of up to 10 items, and uses the normal
    approximation otherwise.
    """
    if set(rank_a) != set(rank_b):
        only_a = sorted(set(rank_a) - set(rank_b))
        only_b = sorted(set(rank_b) - set(rank_a))
        raise ValueError(f"item sets differ: only in first={only_a}, only in second={only_b}")
    items = sorted(rank_a)
    n = len(items)
    if n < 2:
        raise ValueError("need at least 2 items")
    xs = [rank_a[i] for i in items]
    ys = [rank_b[i] for i in items]
    concordant, discordant, ties_x, ties_y = _pair_stats(xs, ys)
    n0 = n * (n - 1) // 2
    denom = math.sqrt((n0 - ties_x) * (n0 - ties_y))
    if denom == 0:
        raise ValueError("degenerate ranking: all items tied")
    tau = (concordant - discordant) / denom

    has_ties = ties_x > 0 or ties_y > 0
    if not has_ties and n <= 10:
        # Exact two-tailed p: discordant pairs are inversions under the null.
        dist = _inversion_count_distribution(n)
        total = math.factorial(n)
        observed = abs(concordant - discordant)
        p = sum(c for k, c in enumerate(dist) if abs(n0 - 2 * k) >= observed) / total
    else:
        # Normal approximation with the tau-b tie-corrected variance.
        var = n * (n - 1) * (2 * n + 5) / 18.0
        if var == 0:
            return tau, 1.0
        z = (concordant - discordant) / math.sqrt(var)
        p = math.erfc(abs(z) / math.sqrt(2.0))
    return tau, min(p, 1.0)


def pearson_r(xs: list[float], ys: list[float]) -> float:
    """Product-moment correlation."""
    if len(xs) != len(ys):
        raise ValueError("series lengths differ")
    if len(xs) < 2:
        raise ValueError("need at least 2 points")
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in ys)
    if var_x == 0 or var_y == 0:
        raise ValueError("degenerate series")
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return cov / math.sqrt(var_x * var_y)


def volatility(series: list[float]) -> float:
    """Population standard deviation scaled by sqrt(series length)."""
    if not series:
        raise ValueError("empty series")
    if len(series) == 1:
        return 0.0
    return statistics.pstdev(series) * math.sqrt(len(series))


def robustness_score(rank_series: list[float]) -> float:
    """Reward rank stability scaled down by a poor median rank.

    1 / ((1 + volatility) * median); a model holding rank 1 everywhere gets 1.0.
    """
    if not rank_series:
        raise ValueError("empty rank series")
    return 1.0 / ((1.0 + volatility(rank_series)) * statistics.median(rank_series))


def robustness_table(rank_table: dict[str, list[float]]) -> list[RobustnessRecord]:
    """Per-model volatility/median/robustness, sorted by robustness descending."""
    records = [
        RobustnessRecord(
            model=model,
            rank_series=tuple(series),
            volatility=volatility(series),
            median_rank=statistics.median(series),
            robustness=robustness_score(series),
        )
        for model, series in rank_table.items()
    ]
    records.sort(key=lambda r: (-r.robustness, r.model))
    return records


def _mean(values):
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def _subset_scores(reports, metric, predicate=None):
    scores = {}
    for model, report in reports:
        rows = [r for r in report.samples if predicate is None or predicate(r)]
        if rows:
            scores[model] = _mean(getattr(r, metric) for r in rows)
    return scores


def rerank_report(
    runs: list[tuple[str, "DatasetReport"]],
    baseline_metric: str = "anls",
    target_metric: str = "s",
    question_types: dict[str, str] | None = None,
) -> dict:
    """Rankings under the baseline and target metrics, overall and per subset,
    with tau against the baseline ranking and per-model rank movements."""
    if len(runs) < 2:
        raise ValueError("need at least 2 model runs to rerank")
    names = [name for name, _ in runs]
    if len(set(names)) != len(names):
        raise ValueError("duplicate model names")

    subsets = {"all": None}
    answer_types = sorted(
        {r.answer_type.value for _, rep in runs for r in rep.samples if r.answer_type}
    )
    for atype in answer_types:
        subsets[f"answer_type:{atype}"] = (
            lambda r, a=atype: r.answer_type is not None and r.answer_type.value == a
        )
    if question_types:
        for qtype in sorted(set(question_types.values())):
            qids = {q for q, t in question_types.items() if t == qtype}
            subsets[f"question_type:{qtype}"] = lambda r, qs=qids: r.qid in qs

    baseline_overall = rank_scores(_subset_scores(runs, baseline_metric))
    target_overall = rank_scores(_subset_scores(runs, target_metric))

    rankings = {}
    taus = {}
    for name, predicate in subsets.items():
        base_scores = _subset_scores(runs, baseline_metric, predicate)
        tgt_scores = _subset_scores(runs, target_metric, predicate)
        if len(tgt_scores) < 2:
            logger.warning("subset %s has fewer than 2 scored models; skipped", name)
            continue
        base_rank = rank_scores(base_scores)
        tgt_rank = rank_scores(tgt_scores)
        rankings[name] = {
            "baseline": base_rank.entries,
            "target": tgt_rank.entries,
        }
        common = {m: baseline_overall.ranks[m] for m in tgt_rank.ranks}
        tau, p = kendall_tau(common, tgt_rank.ranks)
        taus[name] = {"tau": tau, "p_value": p}

    movements = [
        {
            "model": model,
            "baseline_rank": baseline_overall.ranks[model],
            "target_rank": target_overall.ranks[model],
            "movement": baseline_overall.ranks[model] - target_overall.ranks[model],
        }
        for model in sorted(names, key=lambda m: baseline_overall.ranks[m])
    ]
    return {
        "baseline_metric": baseline_metric,
        "target_metric": target_metric,
        "rankings": rankings,
        "tau": taus,
        "movements": movements,
    }
