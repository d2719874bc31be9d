"""End-to-end runs: load inputs, rank with every configured strategy,
export k-prefix training subsets, and write a checksummed manifest.

The run config is a JSON file; all paths inside it resolve relative to
the config file's directory. Reruns with an identical config produce
byte-identical artifacts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .corpus import (
    CONLL_BIO,
    CORPUS_FORMATS,
    Corpus,
    EmbeddingMatrix,
    load_corpus,
    load_embeddings,
    subset_corpus,
    validate_pair,
    write_corpus,
)
from .errors import ConfigError, PipelineError, SentpickError
from .selector import (
    COVERAGE,
    EMBEDDING_STRATEGIES,
    LENGTH,
    LINEAR_PENALTY,
    RANDOM,
    RANK_STRATEGIES,
    Ranking,
    rank_coverage,
    rank_length,
    rank_linear_penalty,
    rank_prefix,
    rank_random,
    rank_ratio_penalty,
    ranking_label,
    write_ranking,
)
from .simspace import SimilarityModel, build_similarity

DEFAULT_K_GRID = tuple(range(10, 101, 10))


@dataclass(frozen=True)
class StrategySpec:
    """One strategy to run, with its parameters."""

    name: str
    alpha: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.name not in RANK_STRATEGIES:
            raise ConfigError(
                f"unknown strategy {self.name!r}; expected one of {RANK_STRATEGIES}"
            )
        if self.name == LINEAR_PENALTY:
            if self.alpha is None:
                raise ConfigError("linear-penalty requires an alpha")
            if self.alpha < 0:
                raise ConfigError(f"alpha must be >= 0, got {self.alpha}")
        elif self.alpha is not None:
            raise ConfigError(f"strategy {self.name!r} does not take alpha")
        if self.name == RANDOM:
            if self.seed is None:
                raise ConfigError("random requires a seed")
        elif self.seed is not None:
            raise ConfigError(f"strategy {self.name!r} is deterministic and takes no seed")

    @property
    def label(self) -> str:
        label = self.name
        if self.alpha is not None:
            label += f"_alpha{self.alpha:g}"
        if self.seed is not None:
            label += f"_seed{self.seed}"
        return label


@dataclass(frozen=True)
class RunConfig:
    corpus: Path
    embeddings: Path
    strategies: tuple[StrategySpec, ...]
    output_dir: Path
    corpus_format: str = CONLL_BIO
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    name: str = ""
    lean: bool = False

    def __post_init__(self) -> None:
        if not self.strategies:
            raise ConfigError("config lists no strategies")
        labels = [spec.label for spec in self.strategies]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate strategy entries: {sorted(labels)}")
        if self.corpus_format not in CORPUS_FORMATS:
            raise ConfigError(
                f"unknown corpus format {self.corpus_format!r}; "
                f"expected one of {CORPUS_FORMATS}"
            )
        if not self.k_grid:
            raise ConfigError("k_grid must be non-empty")
        if any(k < 1 for k in self.k_grid):
            raise ConfigError(f"k_grid entries must be >= 1: {list(self.k_grid)}")
        if any(b <= a for a, b in zip(self.k_grid, self.k_grid[1:])):
            raise ConfigError(f"k_grid must be strictly increasing: {list(self.k_grid)}")


def load_run_config(path: str | Path, output_dir: Optional[str | Path] = None) -> RunConfig:
    """Parse a JSON run config; relative paths resolve against the config dir."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    known = {
        "corpus", "embeddings", "format", "strategies", "k_grid",
        "output_dir", "name", "lean",
    }
    unknown = set(payload) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    for required in ("corpus", "embeddings", "strategies"):
        if required not in payload:
            raise ConfigError(f"{path}: missing required key {required!r}")
    base = path.parent
    specs = []
    for entry in payload["strategies"]:
        if isinstance(entry, str):
            entry = {"name": entry}
        if not isinstance(entry, dict) or "name" not in entry:
            raise ConfigError(f"{path}: each strategy needs a 'name': {entry!r}")
        extra = set(entry) - {"name", "alpha", "seed"}
        if extra:
            raise ConfigError(f"{path}: unknown strategy keys: {sorted(extra)}")
        specs.append(
            StrategySpec(
                name=entry["name"],
                alpha=None if entry.get("alpha") is None else float(entry["alpha"]),
                seed=None if entry.get("seed") is None else int(entry["seed"]),
            )
        )
    if output_dir is not None:
        out = Path(output_dir)
    elif "output_dir" in payload:
        out = base / payload["output_dir"]
    else:
        raise ConfigError(f"{path}: missing output_dir (or pass --output-dir)")
    return RunConfig(
        corpus=base / payload["corpus"],
        embeddings=base / payload["embeddings"],
        strategies=tuple(specs),
        output_dir=out,
        corpus_format=payload.get("format", CONLL_BIO),
        k_grid=tuple(int(k) for k in payload.get("k_grid", DEFAULT_K_GRID)),
        name=payload.get("name", ""),
        lean=bool(payload.get("lean", False)),
    )


def _stage(name: str):
    class _StageContext:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, SentpickError):
                raise PipelineError(f"stage {name}: {exc}") from exc
            return False

    return _StageContext()


def _rank_with(spec: StrategySpec, model: Optional[SimilarityModel], corpus: Corpus) -> Ranking:
    if spec.name == LENGTH:
        return rank_length(corpus)
    if spec.name == RANDOM:
        return rank_random(len(corpus), spec.seed)
    assert model is not None
    if spec.name == LINEAR_PENALTY:
        return rank_linear_penalty(model, spec.alpha)
    if spec.name == COVERAGE:
        return rank_coverage(model)
    return rank_ratio_penalty(model)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return f"sha256:{digest}"


def run(config: RunConfig) -> dict:
    """Execute a full selection run; returns the manifest content.

    Artifacts written to ``config.output_dir``: one ranking file per
    strategy, one conll-bio subset per (strategy, k), and manifest.json
    listing every file with its checksum.
    """
    with _stage("load-corpus"):
        corpus = load_corpus(config.corpus, config.corpus_format, name=config.name)
    with _stage("load-embeddings"):
        emb = load_embeddings(config.embeddings)
    with _stage("validate"):
        validate_pair(corpus, emb)
        n = len(corpus)
        if config.k_grid[-1] > n:
            raise ConfigError(
                f"k_grid maximum {config.k_grid[-1]} exceeds corpus size {n}"
            )
        if not corpus.tagged:
            raise ConfigError(
                "subset export needs a tagged corpus; load conll-bio input "
                "(use the rank subcommand for tag-less pools)"
            )
    model: Optional[SimilarityModel] = None
    if any(spec.name in EMBEDDING_STRATEGIES for spec in config.strategies):
        with _stage("build-similarity"):
            model = build_similarity(emb, materialize=not config.lean)

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}
    strategy_entries = []
    for spec in config.strategies:
        with _stage(f"rank:{spec.label}"):
            ranking = _rank_with(spec, model, corpus)
            ranking_file = f"ranking_{spec.label}.tsv"
            write_ranking(ranking, out / ranking_file)
            files[ranking_file] = _sha256(out / ranking_file)
        subset_files = {}
        with _stage(f"subsets:{spec.label}"):
            for k in config.k_grid:
                prefix = rank_prefix(ranking, k)
                subset = subset_corpus(corpus, prefix)
                subset_file = f"subset_{spec.label}_k{k}.conll"
                write_corpus(subset, out / subset_file, CONLL_BIO)
                files[subset_file] = _sha256(out / subset_file)
                subset_files[str(k)] = {
                    "file": subset_file,
                    "indices": [int(i) for i in prefix],
                }
        strategy_entries.append(
            {
                "name": spec.name,
                "alpha": spec.alpha,
                "seed": spec.seed,
                "label": spec.label,
                "ranking_file": ranking_file,
                "subsets": subset_files,
            }
        )

    manifest = {
        "engine": {"package": "sentpick", "version": __version__, "rng": "pcg64"},
        "corpus": {
            "path": str(config.corpus),
            "format": config.corpus_format,
            "name": corpus.name,
            "n": n,
        },
        "embeddings": {"path": str(config.embeddings), "dim": emb.dim},
        "beta": None if model is None else model.beta,
        "k_grid": [int(k) for k in config.k_grid],
        "strategies": strategy_entries,
        "files": files,
    }
    with _stage("manifest"):
        (out / "manifest.json").write_text(
            json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    return manifest


def verify_manifest(output_dir: str | Path) -> None:
    """Re-hash every file listed in manifest.json; raise on any mismatch."""
    out = Path(output_dir)
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    for name, expected in manifest["files"].items():
        target = out / name
        if not target.exists():
            raise PipelineError(f"manifest lists missing file {name}")
        actual = _sha256(target)
        if actual != expected:
            raise PipelineError(
                f"checksum mismatch for {name}: manifest {expected}, file {actual}"
            )


def export_tsne_input(
    model: SimilarityModel,
    emb: EmbeddingMatrix,
    rankings: Sequence[Ranking],
    top: int,
    path: str | Path,
) -> None:
    """Write embeddings plus top-prefix membership flags for projection tools.

    One TSV data row per sentence: d embedding columns followed by one
    0/1 column per ranking marking its top-``top`` prefix. A single '#'
    header names the flag columns.
    """
    if emb.rows != model.n:
        raise PipelineError(
            f"embedding rows {emb.rows} do not match model size {model.n}"
        )
    if not 1 <= top <= model.n:
        raise PipelineError(f"top={top} out of range [1, {model.n}]")
    labels = []
    prefixes = []
    for ranking in rankings:
        if ranking.n != model.n:
            raise PipelineError(
                f"ranking {ranking.strategy!r} covers {ranking.n} sentences, "
                f"expected {model.n}"
            )
        labels.append(ranking_label(ranking))
        prefixes.append(set(rank_prefix(ranking, top)))
    lines = [
        "# columns: "
        + " ".join([f"e{j}" for j in range(emb.dim)] + [f"top_{label}" for label in labels])
    ]
    for i in range(model.n):
        cells = [repr(float(v)) for v in emb.values[i]]
        cells.extend("1" if i in prefix else "0" for prefix in prefixes)
        lines.append("\t".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
