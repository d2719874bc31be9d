"""Command-line interface for the evaluation harness.

Subcommands:
  train         fit the tagger on one subset, report best test F1
  curve         full protocol for one strategy: selection + training grid
  curve-render  summarize a points file into TSV + PNG
  report        directional comparison between strategy curves
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import TaggerConfig
from .curves import read_points, render_curves, summarize, write_points, write_summary
from .protocol import (
    LOOP_STRATEGIES,
    MIT_RESTAURANT_REFERENCE,
    RANKING_STRATEGIES,
    directional_report,
    loop_curve,
    ranking_curve,
)
from .train import train_and_score
from .uncertainty import emit_uncertainties
from .data import read_conll, read_plain


def parse_k_grid(text: str) -> list[int]:
    """Accept '10..100' (step = lower bound), '10..100:5', or '10,20,30'."""
    if ".." in text:
        bounds, _, step_text = text.partition(":")
        low_text, _, high_text = bounds.partition("..")
        low, high = int(low_text), int(high_text)
        step = int(step_text) if step_text else low
        if low < 1 or step < 1 or high < low:
            raise ValueError(f"bad k-grid {text!r}")
        return list(range(low, high + 1, step))
    return [int(part) for part in text.split(",") if part.strip()]


def _tagger_config(args: argparse.Namespace) -> TaggerConfig:
    cfg = TaggerConfig()
    for name in (
        "word_dim", "char_dim", "word_hidden", "char_hidden",
        "max_epochs", "patience", "batch_size", "seed",
    ):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "no_glove", False):
        cfg.use_glove = False
    if getattr(args, "glove", None):
        cfg.glove_path = args.glove
    cfg.__post_init__()
    return cfg


def _add_tagger_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--word-dim", dest="word_dim", type=int)
    parser.add_argument("--char-dim", dest="char_dim", type=int)
    parser.add_argument("--word-hidden", dest="word_hidden", type=int)
    parser.add_argument("--char-hidden", dest="char_hidden", type=int)
    parser.add_argument("--max-epochs", dest="max_epochs", type=int)
    parser.add_argument("--epochs", dest="max_epochs", type=int,
                        help="alias for --max-epochs")
    parser.add_argument("--patience", type=int)
    parser.add_argument("--batch-size", dest="batch_size", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--glove", help="local pretrained word-vector file")
    parser.add_argument("--no-glove", action="store_true",
                        help="skip pretrained vectors entirely")


def _cmd_train(args: argparse.Namespace) -> int:
    cfg = _tagger_config(args)
    result = train_and_score(args.train, args.test, cfg)
    print(
        f"best_f1={result.best_f1:.2f} at epoch {result.best_epoch} "
        f"({result.epochs_run} epochs run, {result.notes})"
    )
    if args.emit_uncertainty:
        pool = args.pool or args.train
        token_seqs = (
            read_plain(pool) if args.pool_format == "plain-lines"
            else [s.tokens for s in read_conll(pool)]
        )
        emit_uncertainties(result.model, result.vocab, token_seqs, cfg, args.emit_uncertainty)
        print(f"wrote {args.emit_uncertainty} ({len(token_seqs)} sentences)")
    return 0


def _cmd_curve(args: argparse.Namespace) -> int:
    cfg = _tagger_config(args)
    k_grid = parse_k_grid(args.k_grid)
    workdir = Path(args.workdir or (Path(args.output_dir) / "work"))
    selector_cmd = tuple(args.selector.split())
    if args.strategy in LOOP_STRATEGIES:
        points = loop_curve(
            args.strategy, args.domain, k_grid, args.reps, cfg,
            workdir=workdir, selector_cmd=selector_cmd, base_seed=args.base_seed,
        )
    else:
        points = ranking_curve(
            args.strategy, args.domain, k_grid, args.reps, cfg,
            workdir=workdir, selector_cmd=selector_cmd,
            alpha=args.alpha, base_seed=args.base_seed,
        )
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    points_file = out / "points.tsv"
    write_points(points, points_file, append=args.append)
    rows = summarize(read_points(points_file))
    write_summary(rows, out / "curves.tsv")
    render_curves(rows, out / "curves.png", title=Path(args.domain).name)
    print(f"wrote {points_file}, {out / 'curves.tsv'}, {out / 'curves.png'}")
    return 0


def _cmd_curve_render(args: argparse.Namespace) -> int:
    rows = summarize(read_points(args.points))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_summary(rows, out / "curves.tsv")
    render_curves(rows, out / "curves.png", title=args.title)
    print(f"wrote {out / 'curves.tsv'} and {out / 'curves.png'}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    points = []
    for path in args.points:
        points.extend(read_points(path))
    reference = MIT_RESTAURANT_REFERENCE if args.reference == "mit-restaurant" else None
    print(directional_report(points, reference))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evalharness",
        description="Train taggers on selected subsets and plot F1-vs-k curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train once and report best test F1")
    p_train.add_argument("--train", required=True)
    p_train.add_argument("--test", required=True)
    p_train.add_argument("--emit-uncertainty", metavar="FILE",
                         help="write pool uncertainties (JSONL) after training")
    p_train.add_argument("--pool", help="pool corpus to score (default: the train file)")
    p_train.add_argument("--pool-format", choices=("conll-bio", "plain-lines"),
                         default="conll-bio")
    _add_tagger_flags(p_train)
    p_train.set_defaults(func=_cmd_train)

    p_curve = sub.add_parser("curve", help="full protocol for one strategy")
    p_curve.add_argument("--strategy", required=True,
                         choices=RANKING_STRATEGIES + LOOP_STRATEGIES)
    p_curve.add_argument("--domain", required=True,
                         help="directory with train.conll, test.conll, train.emb")
    p_curve.add_argument("--k-grid", default="10..100",
                         help="'10..100', '10..100:5', or '10,20,30'")
    p_curve.add_argument("--reps", type=int, default=5,
                         help="repetitions for stochastic strategies")
    p_curve.add_argument("--alpha", type=float, help="linear-penalty trade-off")
    p_curve.add_argument("--base-seed", type=int, default=0)
    p_curve.add_argument("--selector", default="sentpick",
                         help="selection engine command")
    p_curve.add_argument("--output-dir", required=True)
    p_curve.add_argument("--workdir")
    p_curve.add_argument("--append", action="store_true",
                         help="append to an existing points.tsv")
    _add_tagger_flags(p_curve)
    p_curve.set_defaults(func=_cmd_curve)

    p_render = sub.add_parser("curve-render", help="TSV + PNG from a points file")
    p_render.add_argument("--points", required=True)
    p_render.add_argument("--output-dir", required=True)
    p_render.add_argument("--title", default="")
    p_render.set_defaults(func=_cmd_curve_render)

    p_report = sub.add_parser("report", help="directional comparison of curves")
    p_report.add_argument("--points", nargs="+", required=True)
    p_report.add_argument("--reference", choices=("none", "mit-restaurant"),
                          default="none")
    p_report.set_defaults(func=_cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
