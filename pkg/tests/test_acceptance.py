"""Acceptance suite: one test per release criterion, one pass line each.

Run with `pytest tests/test_acceptance.py -v` or `-s` to see the summary
lines. Criteria use independent oracles (brute-force search, explicit circle
containment, exhaustive pair counting) against frozen tolerances.
"""

import itertools
import json
import math
import os
import random
import string
import subprocess
import sys
import time

import pytest

from smudge import (
    AnswerType,
    BBox,
    answer_distance,
    build_beta_skeleton,
    classify_answer_type,
    composite,
    decay,
    ground,
    locate_beta_skeleton,
    locate_reading_order,
    match_score,
    nls,
    numeric_match,
    robustness_score,
    volatility,
)
from smudge.analysis import kendall_tau
from smudge.document_model import Page, Segment, Word
from smudge.similarity import split_hybrid

from conftest import FIXTURES, make_doc


def report(name):
    print(f"PASS: {name}")


VOCAB = [
    "".join(random.Random(i).choices(string.ascii_lowercase,
                                     k=random.Random(i).randint(1, 8)))
    for i in range(300)
]


def random_doc(rng, max_words=50):
    n_words = rng.randint(1, max_words)
    lines, left = [], n_words
    while left > 0:
        k = min(left, rng.randint(1, 10))
        left -= k
        lines.append(" ".join(rng.choice(VOCAB) for _ in range(k)))
    return make_doc(lines)


def test_nls_anchor():
    start = time.time()
    assert nls("apple", "app1e") == 0.8
    assert abs(nls("up to 1z milligrams", "up to 12 milligrams") - 0.9474) <= 0.005
    assert time.time() - start < 1.0
    report("NLS anchor (0.8 exact; 0.9474 +/- 0.005; < 1 s)")


def test_geometry_anchor():
    page = Page(page_num=0, width=1000, height=1000, segments=())
    d_a = answer_distance(BBox(0, 0, 500, 20), BBox(500, 0, 1000, 20), page)
    d_b = answer_distance(BBox(0, 0, 50, 20), BBox(50, 0, 100, 20), page)
    assert abs(d_a - 0.5) <= 1e-12
    assert abs(d_b - 0.05) <= 1e-12
    report("geometry anchor (adjacent half-page 0.5, small-box 0.05, 1e-12)")


def test_composite_anchor():
    assert composite(0.0, 1.0, 0.25) == 0.75
    assert abs(composite(0.74, 1.0, 0.25) - 0.935) <= 0.005
    rng = random.Random(2024)
    for _ in range(1000):
        m, g = rng.random(), rng.random()
        assert composite(m, g, 1.0) == m
        assert composite(m, g, 0.0) == g
    report("composite anchor (0.75 exact; 0.935 +/- 0.005; endpoints on 1000 pairs)")


def test_hallucination_contract():
    rng = random.Random(99)
    for _ in range(200):
        doc = random_doc(rng, max_words=30)
        # Queries built from a disjoint alphabet cannot clear the threshold.
        absent = " ".join(
            "".join(rng.choices("0123456789", k=rng.randint(6, 10)))
            for _ in range(rng.randint(1, 3))
        )
        gt = rng.choice([w.text for p in doc.pages for s in p.segments
                         for w in s.words])
        result = ground(absent, gt, doc)
        best = locate_reading_order(absent, doc)
        assert best.match_nls <= 0.3
        assert result.hallucinated
        assert result.distance == 1.0
        assert result.score == 0.0
    report("hallucination contract (200 synthetic pages, d=1, g=0, flag set)")


def brute_force_locate(query, doc, max_len):
    """Oracle: every contiguous window of every length 1..max_len."""
    best_score, best_key = -1.0, None
    for page in doc.pages:
        for seg_idx, segment in enumerate(page.segments):
            texts = [w.text for w in segment.words]
            for start in range(len(texts)):
                for end in range(start + 1, min(start + max_len, len(texts)) + 1):
                    score = nls(query, " ".join(texts[start:end]))
                    if score > best_score:
                        best_score = score
                        best_key = (page.page_num, seg_idx, start, end)
    return best_score, best_key


def test_localization_oracle():
    start = time.time()
    rng = random.Random(4242)
    for _ in range(1000):
        doc = random_doc(rng)
        segments = [s for p in doc.pages for s in p.segments]
        roll = rng.random()
        if roll < 0.4:
            seg = rng.choice(segments)
            toks = [w.text for w in seg.words]
            s0 = rng.randrange(len(toks))
            query = " ".join(toks[s0 : s0 + rng.randint(1, 4)])
        elif roll < 0.7:
            seg = rng.choice(segments)
            toks = [w.text for w in seg.words]
            s0 = rng.randrange(len(toks))
            query = " ".join(toks[s0 : s0 + rng.randint(1, 4)])
            pos = rng.randrange(len(query))
            query = query[:pos] + rng.choice("xq9z") + query[pos + 1 :]
        else:
            query = " ".join(rng.choice(VOCAB) for _ in range(rng.randint(1, 4)))
        span = locate_reading_order(query, doc)
        n = max(1, len(query.split()))
        score, key = brute_force_locate(query, doc, n + 2)
        seg_idx = span.positions[0][0]
        selected = (span.page_num, seg_idx, span.positions[0][1],
                    span.positions[-1][1] + 1)
        assert span.match_nls == score and selected == key
    elapsed = time.time() - start
    assert elapsed < 30.0
    report(f"localization oracle (1000 docs byte-identical, {elapsed:.1f} s < 30 s)")


def oracle_gabriel(points):
    """Closed-disk oracle: explicit center/radius containment per pair."""
    edges = set()
    for i, j in itertools.combinations(range(len(points)), 2):
        (x1, y1), (x2, y2) = points[i], points[j]
        if (x1, y1) == (x2, y2):
            edges.add((i, j))
            continue
        cx, cy = (x1 + x2) / 2, (y1 + y2) / 2
        r2 = ((x1 - x2) ** 2 + (y1 - y2) ** 2) / 4
        if not any(
            (px - cx) ** 2 + (py - cy) ** 2 <= r2 + 1e-9
            for k, (px, py) in enumerate(points) if k not in (i, j)
        ):
            edges.add((i, j))
    return edges


def gabriel_edges(points):
    words = tuple(Word(f"w{i}", BBox(x, y, x, y))
                  for i, (x, y) in enumerate(points))
    page = Page(0, 1000, 1000, (Segment(words),))
    nodes, adjacency = build_beta_skeleton(page)
    index = {k: i for i, k in enumerate(sorted(nodes))}
    return {tuple(sorted((index[u], index[v])))
            for u in adjacency for v in adjacency[u]}


def test_beta_skeleton_equivalence():
    # Walk backend vs reading order on 200 single-line pages.
    rng = random.Random(77)
    for _ in range(200):
        tokens = rng.sample(VOCAB, rng.randint(2, 8))
        doc = make_doc([" ".join(tokens)])
        s0 = rng.randrange(len(tokens))
        query = " ".join(tokens[s0 : s0 + rng.randint(1, min(3, len(tokens) - s0))])
        walk = locate_beta_skeleton(query, doc)
        reading = locate_reading_order(query, doc)
        assert walk is not None
        assert {p[1] for p in walk.positions} == {p[1] for p in reading.positions}

    # Gabriel construction vs the closed-disk oracle, point sets up to 12:
    # every subset of a fixed degenerate grid plus seeded integer sets.
    grid = [(0, 0), (10, 0), (20, 0), (0, 10), (10, 10), (20, 10)]
    checked = 0
    for size in range(2, len(grid) + 1):
        for points in itertools.combinations(grid, size):
            assert gabriel_edges(points) == oracle_gabriel(points)
            checked += 1
    for n in range(2, 13):
        for trial in range(30):
            rng = random.Random(n * 1000 + trial)
            points = [(rng.randint(0, 30), rng.randint(0, 30)) for _ in range(n)]
            assert gabriel_edges(points) == oracle_gabriel(points)
            checked += 1
    report(f"beta-skeleton equivalence (200 pages; Gabriel oracle on {checked} sets <= 12 pts)")


def test_type_pipeline():
    rng = random.Random(31)
    alphabet = string.ascii_letters + string.digits + " ,.%()-"
    for _ in range(500):
        s = "".join(rng.choices(alphabet, k=rng.randint(1, 20)))
        chars = [c for c in s if not c.isspace()]
        if not chars:
            continue
        expected = (
            AnswerType.NUMERIC if all(c in string.digits for c in chars)
            else AnswerType.TEXTUAL if all(c.isalpha() for c in chars)
            else AnswerType.HYBRID
        )
        assert classify_answer_type(s) is expected

    # Hybrid collapses to zero whenever the numeric subscore is zero.
    for pred, gt in [("up to 1z milligrams", "up to 12 milligrams"),
                     ("7,00", "1,700"), ("99%", "12%")]:
        result = match_score(pred, gt)
        assert result.num_score == 0.0 and result.value == 0.0

    # Scale matching accepts exactly the configured factor set.
    allowed = {1, 100, 1000, 10**6, 10**9}
    base = 17
    for k in list(range(1, 2001)) + [10**4, 10**5, 10**6, 10**7, 10**8, 10**9]:
        expected = 1.0 if k in allowed else 0.0
        assert numeric_match(str(base * k), str(base)) == expected
        assert numeric_match(str(base), str(base * k)) == expected
    report("type pipeline (500 fuzzed classifications; hybrid zero rule; exact scale set)")


def brute_pair_tau(xs, ys):
    n = len(xs)
    total = sum(
        (1 if (xs[i] - xs[j]) * (ys[i] - ys[j]) > 0 else -1)
        for i, j in itertools.combinations(range(n), 2)
    )
    return total / (n * (n - 1) / 2)


def test_statistics_oracles():
    for n in range(2, 7):
        perms = list(itertools.permutations(range(1, n + 1)))
        for perm_a in perms:
            rank_a = {str(i): v for i, v in enumerate(perm_a)}
            for perm_b in perms:
                rank_b = {str(i): v for i, v in enumerate(perm_b)}
                tau, _ = kendall_tau(rank_a, rank_b)
                assert abs(tau - brute_pair_tau(perm_a, perm_b)) <= 1e-12

    assert abs(volatility([1, 2, 3]) - math.sqrt(2)) <= 1e-12
    assert (robustness_score([1, 1, 1, 1])
            > robustness_score([10, 10, 10])
            > robustness_score([1, 5, 1, 5]))
    report("statistics oracles (exhaustive tau n<=6; volatility sqrt(2); robustness order)")


def test_decay_properties():
    assert decay(0.0) == 1.0
    assert decay(1.0) == 0.0
    values = [decay(i / 10_000) for i in range(10_001)]
    # Strict decrease until exp() underflows to zero near d = 1, zero after.
    positive = [v for v in values if v > 0.0]
    assert all(a > b for a, b in zip(positive, positive[1:]))
    assert all(v == 0.0 for v in values[len(positive):])
    assert len(positive) > 9_900
    report("decay properties (endpoints; strict decrease on 10^4-point grid)")


def run_score(tmp_path, tag, threads):
    out = tmp_path / f"report_{tag}.json"
    env = dict(os.environ, SMUDGE_THREADS=str(threads))
    proc = subprocess.run(
        [sys.executable, "-m", "smudge.cli", "score",
         "--ocr-dir", str(FIXTURES / "ocr"),
         "--gt", str(FIXTURES / "gt.json"),
         "--predictions", str(FIXTURES / "preds_model_b.json"),
         "--output", str(out)],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0, proc.stderr
    return out.read_bytes()


def test_end_to_end_determinism(tmp_path):
    gt = json.loads((FIXTURES / "gt.json").read_text())
    assert len(gt["samples"]) >= 20
    first = run_score(tmp_path, "run1", threads=1)
    second = run_score(tmp_path, "run2", threads=1)
    threaded = run_score(tmp_path, "run8", threads=8)
    assert first == second == threaded
    report("end-to-end determinism (byte-identical across reruns and 1/8 threads)")
