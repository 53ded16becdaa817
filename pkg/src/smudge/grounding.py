"""Answer localization and the spatial grounding score.

Two localization backends are provided: a sliding window over OCR reading
order, and a walk over a Gabriel-graph representation of the page for OCR
output without reliable reading order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .document_model import BBox, DocumentLayout, Page, centroid, merge_bboxes
from .similarity import SimilarityConfig, nls

DEFAULT_SIM = SimilarityConfig()

BACKENDS = ("reading_order", "beta_skeleton")


@dataclass(frozen=True)
class GroundingConfig:
    locate_threshold: float = 0.3
    backend: str = "reading_order"
    window_slack: int = 2
    token_threshold: float = 0.7
    path_slack: int = 2

    def __post_init__(self):
        if not (0.0 <= self.locate_threshold <= 1.0):
            raise ValueError("locate_threshold must lie in [0, 1]")
        if not (0.0 <= self.token_threshold <= 1.0):
            raise ValueError("token_threshold must lie in [0, 1]")
        if self.window_slack < 0 or self.path_slack < 0:
            raise ValueError("slacks must be non-negative")
        if self.backend not in BACKENDS:
            raise ValueError(
                f"unknown backend {self.backend!r}; valid backends: {', '.join(BACKENDS)}"
            )


@dataclass(frozen=True)
class LocatedSpan:
    page_num: int
    # (segment_idx, word_idx) for each member word. Contiguous within one
    # segment for the reading-order backend; a graph path for beta_skeleton.
    positions: tuple[tuple[int, int], ...]
    text: str
    bbox: BBox
    match_nls: float


@dataclass(frozen=True)
class GroundingResult:
    gt_span: Optional[LocatedSpan]
    pred_span: Optional[LocatedSpan]
    distance: float
    score: float
    hallucinated: bool


def locate_reading_order(
    query: str,
    doc: DocumentLayout,
    config: GroundingConfig = GroundingConfig(),
    sim: SimilarityConfig = DEFAULT_SIM,
) -> Optional[LocatedSpan]:
    """Best contiguous in-segment window by NLS against the query.

    Searches windows of 1 to n + slack tokens (n = query token count) on every
    segment. Returns the best span regardless of threshold; ties broken by
    earliest reading-order position. None only for an empty document.
    """
    if not query.strip():
        raise ValueError("query must be non-empty")
    n = max(1, len(query.split()))
    max_len = n + config.window_slack
    best: Optional[LocatedSpan] = None
    best_score = -1.0
    for page in doc.pages:
        for seg_idx, segment in enumerate(page.segments):
            words = segment.words
            texts = [w.text for w in words]
            for start in range(len(words)):
                for length in range(1, min(max_len, len(words) - start) + 1):
                    window_text = " ".join(texts[start : start + length])
                    score = nls(query, window_text, sim)
                    if score > best_score:
                        best_score = score
                        best = LocatedSpan(
                            page_num=page.page_num,
                            positions=tuple(
                                (seg_idx, i) for i in range(start, start + length)
                            ),
                            text=window_text,
                            bbox=merge_bboxes(
                                [w.bbox for w in words[start : start + length]]
                            ),
                            match_nls=score,
                        )
    return best


def answer_distance(
    gt_box: BBox, pred_box: Optional[BBox], page: Page
) -> float:
    """Normalized Manhattan distance between box centroids, in [0, 1].

    An absent prediction box (unlocatable answer) is maximally distant.
    """
    if page.width <= 0 or page.height <= 0:
        raise ValueError("degenerate page extent")
    if pred_box is None:
        return 1.0
    gx, gy = centroid(gt_box)
    px, py = centroid(pred_box)
    d = abs(gx - px) / page.width + abs(gy - py) / page.height
    return min(max(d, 0.0), 1.0)


def decay(d: float) -> float:
    """Exponential decay of normalized distance: exp(-d / (1 - d)); 0 at d = 1."""
    if not (0.0 <= d <= 1.0):
        raise ValueError(f"distance {d} outside [0, 1]")
    if d == 1.0:
        return 0.0
    return math.exp(-d / (1.0 - d))


def _locate(query, doc, config, sim):
    if config.backend == "beta_skeleton":
        return locate_beta_skeleton(query, doc, config, sim)
    return locate_reading_order(query, doc, config, sim)


def ground(
    pred: str,
    gt_variant: str,
    doc: DocumentLayout,
    config: GroundingConfig = GroundingConfig(),
    sim: SimilarityConfig = DEFAULT_SIM,
) -> GroundingResult:
    """Locate both answers and convert their separation into a grounding score.

    The ground truth always keeps its best span; the prediction must clear the
    locate threshold or it is flagged as hallucinated with maximal distance.
    """
    if not gt_variant.strip():
        raise ValueError("ground-truth variant must be non-empty")
    if doc.word_count == 0:
        return GroundingResult(None, None, distance=1.0, score=0.0, hallucinated=True)

    gt_span = _locate(gt_variant, doc, config, sim)
    if gt_span is None:
        # The GT always keeps a best-effort location even when the graph walk
        # finds nothing above its threshold.
        gt_span = locate_reading_order(gt_variant, doc, config, sim)
    pred_span = _locate(pred, doc, config, sim) if pred.strip() else None

    hallucinated = pred_span is None or pred_span.match_nls <= config.locate_threshold
    if hallucinated:
        pred_span = None
        d = 1.0
    elif pred_span.page_num != gt_span.page_num:
        d = 1.0
    else:
        page = next(p for p in doc.pages if p.page_num == gt_span.page_num)
        d = answer_distance(gt_span.bbox, pred_span.bbox, page)
    return GroundingResult(gt_span, pred_span, distance=d, score=decay(d),
                           hallucinated=hallucinated)


def build_beta_skeleton(page: Page, beta: float = 1.0):
    """Gabriel graph over word centroids (beta = 1).

    Nodes are (segment_idx, word_idx) positions; an edge joins u and v unless
    some third centroid lies in the closed disk with u, v as diameter.
    Returns (nodes, adjacency) where adjacency maps node -> set of nodes.
    """
    if beta != 1.0:
        raise ValueError("only beta = 1 (Gabriel graph) is supported")
    entries = [((s, i), w, centroid(w.bbox)) for s, i, w in page.iter_words()]
    if not entries:
        raise ValueError("page has no words")
    nodes = {key: word for key, word, _ in entries}
    points = {key: pt for key, _, pt in entries}
    adjacency = {key: set() for key in nodes}
    keys = list(nodes)
    for a_pos in range(len(keys)):
        for b_pos in range(a_pos + 1, len(keys)):
            u, v = keys[a_pos], keys[b_pos]
            (ux, uy), (vx, vy) = points[u], points[v]
            if (ux, uy) == (vx, vy):
                adjacency[u].add(v)
                adjacency[v].add(u)
                continue
            duv = (ux - vx) ** 2 + (uy - vy) ** 2
            blocked = False
            for w in keys:
                if w == u or w == v:
                    continue
                wx, wy = points[w]
                # Closed-disk test: a point on the diametral circle blocks too.
                if (wx - ux) ** 2 + (wy - uy) ** 2 + (wx - vx) ** 2 + (wy - vy) ** 2 <= duv:
                    blocked = True
                    break
            if not blocked:
                adjacency[u].add(v)
                adjacency[v].add(u)
    return nodes, adjacency


def beta_walk(
    tokens: list[str],
    nodes: dict,
    adjacency: dict,
    config: GroundingConfig = GroundingConfig(),
    sim: SimilarityConfig = DEFAULT_SIM,
) -> Optional[tuple[list, float]]:
    """Best simple graph path matching a token sequence.

    Start candidates match the first token above the token threshold, end
    candidates the last; paths up to len(tokens) + slack nodes are scored by
    NLS of their concatenated text against the full query. Returns None when
    no candidate clears the locate threshold.
    """
    if not tokens:
        raise ValueError("token sequence must be non-empty")
    query = " ".join(tokens)
    starts = [k for k, w in nodes.items()
              if nls(w.text, tokens[0], sim) > config.token_threshold]
    ends = {k for k, w in nodes.items()
            if nls(w.text, tokens[-1], sim) > config.token_threshold}
    if not starts or not ends:
        return None
    max_nodes = len(tokens) + config.path_slack
    best_path: Optional[list] = None
    best_score = -1.0

    def dfs(node, path, on_path):
        nonlocal best_path, best_score
        if node in ends:
            text = " ".join(nodes[k].text for k in path)
            score = nls(query, text, sim)
            if score > best_score:
                best_score = score
                best_path = list(path)
        if len(path) == max_nodes:
            return
        for nxt in sorted(adjacency[node]):
            if nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                dfs(nxt, path, on_path)
                on_path.discard(nxt)
                path.pop()

    for start in sorted(starts):
        dfs(start, [start], {start})
    if best_path is None or best_score <= config.locate_threshold:
        return None
    return best_path, best_score


def locate_beta_skeleton(
    query: str,
    doc: DocumentLayout,
    config: GroundingConfig = GroundingConfig(),
    sim: SimilarityConfig = DEFAULT_SIM,
) -> Optional[LocatedSpan]:
    """Locate a query with the graph-walk backend, best page wins."""
    if not query.strip():
        raise ValueError("query must be non-empty")
    tokens = query.split()
    best: Optional[LocatedSpan] = None
    for page in doc.pages:
        if not any(s.words for s in page.segments):
            continue
        nodes, adjacency = build_beta_skeleton(page)
        walked = beta_walk(tokens, nodes, adjacency, config, sim)
        if walked is None:
            continue
        path, score = walked
        if best is None or score > best.match_nls:
            words = [nodes[k] for k in path]
            best = LocatedSpan(
                page_num=page.page_num,
                positions=tuple(path),
                text=" ".join(w.text for w in words),
                bbox=merge_bboxes([w.bbox for w in words]),
                match_nls=score,
            )
    return best
