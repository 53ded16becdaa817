"""Command-line interface: score, sweep, locate, rerank, analyze, nls."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import analysis, ingest
from .grounding import BACKENDS, GroundingConfig, locate_beta_skeleton, locate_reading_order
from .scoring import DEFAULT_ALPHA_GRID, ScoreConfig, alpha_sweep, score_dataset
from .similarity import SimilarityConfig, nls

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _build_config(args) -> ScoreConfig:
    sim = SimilarityConfig(
        num_weight=args.num_weight,
        str_weight=args.str_weight,
        anls_threshold=args.anls_threshold,
    )
    grounding = GroundingConfig(
        locate_threshold=args.match_threshold,
        backend=args.backend,
        window_slack=args.window_slack,
    )
    return ScoreConfig(alpha=args.alpha, similarity=sim, grounding=grounding)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=0.25,
                        help="composite weight on the match score (default 0.25)")
    parser.add_argument("--num-weight", type=float, default=10.0,
                        help="harmonic weight of the numeric subscore (default 10)")
    parser.add_argument("--str-weight", type=float, default=1.0,
                        help="harmonic weight of the text subscore (default 1)")
    parser.add_argument("--anls-threshold", type=float, default=0.5,
                        help="flattening threshold of the baseline ANLS (default 0.5)")
    parser.add_argument("--match-threshold", type=float, default=0.3,
                        help="minimum span NLS for a prediction to count as located")
    parser.add_argument("--backend", choices=BACKENDS, default="reading_order",
                        help="localization backend")
    parser.add_argument("--window-slack", type=int, default=2,
                        help="extra window tokens beyond the query length")


def _threads() -> int | None:
    env = os.environ.get("SMUDGE_THREADS")
    return max(1, int(env)) if env else None


def _sample_rows_csv(report) -> str:
    header = ["qid", "m", "g", "d", "s", "anls", "answer_type",
              "hallucinated", "missing", "empty_prediction"]
    rows = [
        [r.qid, repr(r.m), repr(r.g), repr(r.d), repr(r.s), repr(r.anls),
         r.answer_type.value if r.answer_type else "",
         int(r.hallucinated), int(r.missing), int(r.empty_prediction)]
        for r in report.samples
    ]
    return _csv_text(header, rows)


def cmd_score(args) -> int:
    config = _build_config(args)
    bundle = ingest.load_bundle_dir(args.gt, args.ocr_dir)
    run = ingest.load_predictions(args.predictions)
    report = score_dataset(bundle, run, config, threads=_threads())
    out = Path(args.output)
    _atomic_write(out, _json_text(report.to_dict()))
    if args.csv:
        _atomic_write(Path(args.csv), _sample_rows_csv(report))
    agg = report.aggregates
    print(f"samples={agg['count']} s={agg['s']:.4f} m={agg['m']:.4f} "
          f"g={agg['g']:.4f} anls={agg['anls']:.4f}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _build_config(args)
    if args.grid:
        try:
            grid = tuple(float(v) for v in args.grid.split(","))
        except ValueError as exc:
            raise UsageError(f"invalid --grid value: {exc}") from exc
    else:
        grid = DEFAULT_ALPHA_GRID
    bundle = ingest.load_bundle_dir(args.gt, args.ocr_dir)
    run = ingest.load_predictions(args.predictions)
    sweep = alpha_sweep(bundle, run, config, grid=grid, threads=_threads())
    text = _csv_text(["alpha", "s"], [[repr(a), repr(s)] for a, s in sweep])
    _atomic_write(Path(args.output), text)
    print(f"wrote {len(sweep)} rows to {args.output}")
    return EXIT_OK


def cmd_locate(args) -> int:
    if not args.query.strip():
        raise UsageError("--query must be non-empty")
    config = GroundingConfig(backend=args.backend,
                             locate_threshold=args.match_threshold,
                             window_slack=args.window_slack)
    doc = ingest.load_ocr(args.ocr)
    if args.backend == "beta_skeleton":
        span = locate_beta_skeleton(args.query, doc, config)
    else:
        span = locate_reading_order(args.query, doc, config)
    hallucinated = span is None or span.match_nls <= config.locate_threshold
    record = {
        "query": args.query,
        "backend": args.backend,
        "hallucinated": hallucinated,
    }
    if span is not None:
        record.update(
            page_num=span.page_num,
            text=span.text,
            bbox=span.bbox.as_list(),
            match_nls=span.match_nls,
        )
    print(json.dumps(record, sort_keys=True, ensure_ascii=False))
    return EXIT_OK


def cmd_rerank(args) -> int:
    if len(args.predictions) < 2:
        raise UsageError("need at least 2 prediction files to rerank")
    config = _build_config(args)
    bundle = ingest.load_bundle_dir(args.gt, args.ocr_dir)
    runs = []
    seen = set()
    for pred_path in args.predictions:
        run = ingest.load_predictions(pred_path)
        if run.name in seen:
            raise UsageError(f"duplicate model name {run.name!r}")
        seen.add(run.name)
        runs.append((run.name, score_dataset(bundle, run, config, threads=_threads())))
    question_types = {
        s.qid: s.question_type for s in bundle.samples if s.question_type
    }
    report = analysis.rerank_report(runs, question_types=question_types or None)
    out = Path(args.output)
    _atomic_write(out, _json_text(report))
    movements_csv = _csv_text(
        ["model", "baseline_rank", "target_rank", "movement"],
        [[m["model"], repr(m["baseline_rank"]), repr(m["target_rank"]),
          repr(m["movement"])] for m in report["movements"]],
    )
    _atomic_write(out.with_suffix(".movements.csv"), movements_csv)
    tau_csv = _csv_text(
        ["subset", "tau", "p_value"],
        [[name, repr(v["tau"]), repr(v["p_value"])]
         for name, v in sorted(report["tau"].items())],
    )
    _atomic_write(out.with_suffix(".tau.csv"), tau_csv)
    print(f"reranked {len(runs)} models over {len(report['tau'])} subsets")
    return EXIT_OK


def cmd_analyze(args) -> int:
    with open(args.ranks, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise UsageError(f"{args.ranks}: empty rank table") from None
        table = {}
        for line in reader:
            if not line:
                continue
            model, values = line[0], line[1:]
            if not values:
                raise UsageError(f"{args.ranks}: no rank columns for {model!r}")
            table[model] = [float(v) for v in values]
    if not table:
        raise UsageError(f"{args.ranks}: no models in rank table")
    records = analysis.robustness_table(table)
    text = _csv_text(
        ["model", "volatility", "median_rank", "robustness"],
        [[r.model, repr(r.volatility), repr(r.median_rank), repr(r.robustness)]
         for r in records],
    )
    if args.output:
        _atomic_write(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_nls(args) -> int:
    print(repr(nls(args.a, args.b)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smudge",
        description="Grounding-aware scoring for Document VQA predictions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score one prediction run")
    p_score.add_argument("--ocr-dir", required=True, help="directory of canonical OCR files")
    p_score.add_argument("--gt", required=True, help="ground-truth file")
    p_score.add_argument("--predictions", required=True, help="prediction file")
    p_score.add_argument("--output", required=True, help="report output path (JSON)")
    p_score.add_argument("--csv", help="optional per-sample CSV output path")
    _add_config_flags(p_score)
    p_score.set_defaults(func=cmd_score)

    p_sweep = sub.add_parser("sweep", help="aggregate score across an alpha grid")
    p_sweep.add_argument("--ocr-dir", required=True)
    p_sweep.add_argument("--gt", required=True)
    p_sweep.add_argument("--predictions", required=True)
    p_sweep.add_argument("--output", required=True, help="CSV output path")
    p_sweep.add_argument("--grid", help="comma-separated alphas (default 0,0.05,...,1)")
    _add_config_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_locate = sub.add_parser("locate", help="locate a query string in one document")
    p_locate.add_argument("--ocr", required=True, help="canonical OCR file")
    p_locate.add_argument("--query", required=True)
    p_locate.add_argument("--backend", choices=BACKENDS, default="reading_order")
    p_locate.add_argument("--match-threshold", type=float, default=0.3)
    p_locate.add_argument("--window-slack", type=int, default=2)
    p_locate.set_defaults(func=cmd_locate)

    p_rerank = sub.add_parser("rerank", help="compare rankings across prediction runs")
    p_rerank.add_argument("--ocr-dir", required=True)
    p_rerank.add_argument("--gt", required=True)
    p_rerank.add_argument("--output", required=True, help="report output path (JSON)")
    p_rerank.add_argument("predictions", nargs="+", help="prediction files (>= 2)")
    _add_config_flags(p_rerank)
    p_rerank.set_defaults(func=cmd_rerank)

    p_analyze = sub.add_parser("analyze", help="volatility/robustness from a rank table")
    p_analyze.add_argument("--ranks", required=True,
                           help="CSV of model,rank_subset1,rank_subset2,...")
    p_analyze.add_argument("--output", help="CSV output path (default stdout)")
    p_analyze.set_defaults(func=cmd_analyze)

    p_nls = sub.add_parser("nls", help="normalized Levenshtein similarity of two strings")
    p_nls.add_argument("a")
    p_nls.add_argument("b")
    p_nls.set_defaults(func=cmd_nls)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ingest.SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
