"""Command-line interface.

Subcommands:
  rank               write a full ranking for one strategy
  select-batch       pick an uncertainty-driven batch (alc / alr)
  stats              ground-set geometry summary and neighbor tables
  run                execute a JSON run config end to end
  export-projection  dump embeddings + top-prefix flags for plotting tools
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .corpus import CONLL_BIO, CORPUS_FORMATS, load_corpus, load_embeddings, validate_pair
from .errors import SelectionError, SentpickError
from .pipeline import export_tsne_input, load_run_config, run
from .selector import (
    ALC,
    ALR,
    BATCH_STRATEGIES,
    EMBEDDING_STRATEGIES,
    LINEAR_PENALTY,
    RANDOM,
    RANK_STRATEGIES,
    rank_coverage,
    rank_length,
    rank_linear_penalty,
    rank_random,
    rank_ratio_penalty,
    read_index_list,
    read_ranking,
    read_uncertainties,
    select_batch_alc,
    select_batch_alr,
    write_index_list,
    write_ranking,
)
from .simspace import build_similarity, nearest_neighbors


def _cmd_rank(args: argparse.Namespace) -> int:
    strategy = args.strategy
    needs_model = strategy in EMBEDDING_STRATEGIES
    if needs_model and args.embeddings is None:
        raise SelectionError(f"strategy {strategy!r} requires --embeddings")
    if strategy == LINEAR_PENALTY and args.alpha is None:
        raise SelectionError("linear-penalty requires --alpha")
    if strategy != LINEAR_PENALTY and args.alpha is not None:
        raise SelectionError(f"strategy {strategy!r} does not take --alpha")
    if strategy == RANDOM and args.seed is None:
        raise SelectionError("random requires --seed")
    if strategy != RANDOM and args.seed is not None:
        raise SelectionError(f"strategy {strategy!r} is deterministic and takes no --seed")

    corpus = load_corpus(args.corpus, args.format)
    model = None
    if args.embeddings is not None:
        emb = load_embeddings(args.embeddings)
        validate_pair(corpus, emb)
        if needs_model:
            model = build_similarity(emb, materialize=not args.lean)

    if strategy == "ratio-penalty":
        ranking = rank_ratio_penalty(model)
    elif strategy == "coverage":
        ranking = rank_coverage(model)
    elif strategy == LINEAR_PENALTY:
        ranking = rank_linear_penalty(model, args.alpha)
    elif strategy == RANDOM:
        ranking = rank_random(len(corpus), args.seed)
    else:
        ranking = rank_length(corpus)
    write_ranking(ranking, args.output)
    print(f"wrote {args.output} ({ranking.n} sentences, strategy {strategy})")
    return 0


def _cmd_select_batch(args: argparse.Namespace) -> int:
    if args.strategy == ALR and args.seed is None:
        raise SelectionError("alr requires --seed")
    if args.strategy == ALC and args.seed is not None:
        raise SelectionError("alc is deterministic and takes no --seed")
    records = read_uncertainties(args.uncertainty)
    exclude = read_index_list(args.exclude)
    if args.strategy == ALC:
        picked = select_batch_alc(records, exclude, args.batch)
    else:
        picked = select_batch_alr(records, exclude, args.batch, args.seed)
    write_index_list(picked, args.output)
    print(f"wrote {args.output} ({len(picked)} indices, strategy {args.strategy})")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    emb = load_embeddings(args.embeddings)
    corpus = None
    if args.corpus is not None:
        corpus = load_corpus(args.corpus, args.format)
        validate_pair(corpus, emb)
    model = build_similarity(emb, materialize=not args.lean)
    print(f"n={model.n}")
    print(f"d={emb.dim}")
    print(f"beta={model.beta!r}")
    if model.n >= 2:
        mean, lo, hi = model.offdiagonal_stats()
        print(f"offdiag_sim mean={mean!r} min={lo!r} max={hi!r}")
    if args.neighbors_of is not None:
        s = args.neighbors_of
        print(f"neighbors of {s}:")
        for rank, (idx, sim) in enumerate(
            nearest_neighbors(model, s, args.top), start=1
        ):
            text = "" if corpus is None else "\t" + " ".join(corpus[idx].tokens)
            print(f"{rank}\t{idx}\t{sim!r}{text}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, output_dir=args.output_dir)
    manifest = run(config)
    print(
        f"wrote {len(manifest['files'])} artifact(s) + manifest.json "
        f"to {config.output_dir}"
    )
    return 0


def _cmd_export_projection(args: argparse.Namespace) -> int:
    emb = load_embeddings(args.embeddings)
    model = build_similarity(emb, materialize=not args.lean)
    rankings = [read_ranking(path) for path in args.rankings]
    export_tsne_input(model, emb, rankings, args.top, args.output)
    print(f"wrote {args.output} ({emb.rows} rows, {len(rankings)} flag column(s))")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentpick",
        description="Rank unlabeled sentences by expected labeling utility.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="write a full ranking for one strategy")
    p_rank.add_argument("--strategy", required=True, choices=RANK_STRATEGIES)
    p_rank.add_argument("--corpus", required=True, type=Path)
    p_rank.add_argument("--format", default=CONLL_BIO, choices=CORPUS_FORMATS)
    p_rank.add_argument("--embeddings", type=Path)
    p_rank.add_argument("--alpha", type=float)
    p_rank.add_argument("--seed", type=int)
    p_rank.add_argument("--lean", action="store_true",
                        help="do not materialize the similarity matrix")
    p_rank.add_argument("--output", required=True, type=Path)
    p_rank.set_defaults(func=_cmd_rank)

    p_batch = sub.add_parser("select-batch", help="uncertainty-driven batch selection")
    p_batch.add_argument("--strategy", required=True, choices=BATCH_STRATEGIES)
    p_batch.add_argument("--uncertainty", required=True, type=Path)
    p_batch.add_argument("--exclude", required=True, type=Path)
    p_batch.add_argument("--batch", required=True, type=int)
    p_batch.add_argument("--seed", type=int)
    p_batch.add_argument("--output", required=True, type=Path)
    p_batch.set_defaults(func=_cmd_select_batch)

    p_stats = sub.add_parser("stats", help="embedding-cloud summary statistics")
    p_stats.add_argument("--embeddings", required=True, type=Path)
    p_stats.add_argument("--corpus", type=Path)
    p_stats.add_argument("--format", default=CONLL_BIO, choices=CORPUS_FORMATS)
    p_stats.add_argument("--neighbors-of", type=int,
                         help="dump the nearest-neighbor table for this index")
    p_stats.add_argument("--top", type=int, default=3,
                         help="neighbor count for --neighbors-of")
    p_stats.add_argument("--lean", action="store_true")
    p_stats.set_defaults(func=_cmd_stats)

    p_run = sub.add_parser("run", help="execute a JSON run config")
    p_run.add_argument("--config", required=True, type=Path)
    p_run.add_argument("--output-dir", type=Path,
                       help="override the config's output directory")
    p_run.set_defaults(func=_cmd_run)

    p_proj = sub.add_parser(
        "export-projection",
        help="dump embeddings plus top-prefix flags for external projection",
    )
    p_proj.add_argument("--embeddings", required=True, type=Path)
    p_proj.add_argument("--rankings", required=True, nargs="+", type=Path)
    p_proj.add_argument("--top", required=True, type=int)
    p_proj.add_argument("--lean", action="store_true")
    p_proj.add_argument("--output", required=True, type=Path)
    p_proj.set_defaults(func=_cmd_export_projection)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SentpickError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
