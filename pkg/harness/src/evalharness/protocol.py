"""Experiment protocol: produce F1-vs-k curves for every selection strategy.

A domain directory holds ``train.conll`` (the selection pool),
``test.conll`` (held-out evaluation), and ``train.emb`` (one embedding
per pool sentence). Ranking strategies are executed by the selection
engine's CLI; this harness trains on the exported k-prefix subsets.
"""

from __future__ import annotations

import json
import logging
import subprocess
from pathlib import Path
from typing import Optional, Sequence

from .config import TaggerConfig
from .curves import CurvePoint, CurveSummary, summarize
from .loop import al_loop
from .train import train_and_score

log = logging.getLogger(__name__)

RANKING_STRATEGIES = ("ratio-penalty", "coverage", "linear-penalty", "random", "length")
LOOP_STRATEGIES = ("alc", "alr")
DETERMINISTIC = ("ratio-penalty", "coverage", "linear-penalty", "length")

# Published reference results on the MIT Restaurant benchmark, used by the
# comparison report: mean F1 gap between ratio-penalty selection and the
# best uncertainty baseline (ALR), and the relative improvement at k=10.
MIT_RESTAURANT_REFERENCE = {
    "rps_minus_alr_mean_gap": 6.0,
    "rps_over_alr_relative_improvement_at_k10": 0.55,
    "full_data_f1": 80.11,
}


class DomainLayoutError(ValueError):
    pass


def domain_paths(domain_dir: str | Path) -> tuple[Path, Path, Path]:
    domain_dir = Path(domain_dir)
    train = domain_dir / "train.conll"
    test = domain_dir / "test.conll"
    emb = domain_dir / "train.emb"
    missing = [str(p) for p in (train, test, emb) if not p.exists()]
    if missing:
        raise DomainLayoutError(f"domain dir is missing: {', '.join(missing)}")
    return train, test, emb


def _run_selection(
    config_payload: dict, workdir: Path, selector_cmd: Sequence[str]
) -> Path:
    config_path = workdir / "selection_config.json"
    config_path.write_text(json.dumps(config_payload, indent=2), encoding="utf-8")
    proc = subprocess.run(
        [*selector_cmd, "run", "--config", str(config_path)],
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(
            f"selection run failed (exit {proc.returncode}): {proc.stderr.strip()}"
        )
    return workdir / "selection"


def ranking_curve(
    strategy: str,
    domain_dir: str | Path,
    k_grid: Sequence[int],
    reps: int,
    cfg: Optional[TaggerConfig] = None,
    *,
    workdir: str | Path,
    selector_cmd: Sequence[str] = ("sentpick",),
    alpha: Optional[float] = None,
    base_seed: int = 0,
) -> list[CurvePoint]:
    """Train on the k-prefix subsets of one ranking strategy.

    Deterministic strategies yield exactly one point per k; the random
    baseline runs ``reps`` seeded repetitions.
    """
    if strategy not in RANKING_STRATEGIES:
        raise ValueError(f"unknown ranking strategy {strategy!r}")
    if strategy == "linear-penalty" and alpha is None:
        raise ValueError("linear-penalty needs an alpha")
    cfg = cfg or TaggerConfig()
    train, test, emb = domain_paths(domain_dir)
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    if strategy in DETERMINISTIC:
        entries = [{"name": strategy, **({"alpha": alpha} if alpha is not None else {})}]
        if reps != 1:
            log.info("%s is deterministic; one repetition per k", strategy)
    else:
        entries = [{"name": "random", "seed": base_seed + rep} for rep in range(reps)]

    out_dir = _run_selection(
        {
            "corpus": str(train.resolve()),
            "embeddings": str(emb.resolve()),
            "strategies": entries,
            "k_grid": list(k_grid),
            "output_dir": "selection",
        },
        workdir,
        selector_cmd,
    )
    manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))

    points: list[CurvePoint] = []
    for entry in manifest["strategies"]:
        for k_text, subset in sorted(entry["subsets"].items(), key=lambda kv: int(kv[0])):
            result = train_and_score(out_dir / subset["file"], test, cfg)
            points.append(
                CurvePoint(
                    strategy=entry["label"] if entry["name"] != "random" else "random",
                    k=int(k_text),
                    seed=entry.get("seed"),
                    f1=result.best_f1,
                    notes=result.notes,
                )
            )
    return points


def loop_curve(
    strategy: str,
    domain_dir: str | Path,
    k_grid: Sequence[int],
    reps: int,
    cfg: Optional[TaggerConfig] = None,
    *,
    workdir: str | Path,
    selector_cmd: Sequence[str] = ("sentpick",),
    base_seed: int = 0,
) -> list[CurvePoint]:
    """Active-learning curves; k_grid must be batch, 2*batch, ..."""
    batch = int(k_grid[0])
    expected = [batch * (i + 1) for i in range(len(k_grid))]
    if list(k_grid) != expected:
        raise ValueError(
            f"acquisition loops need a uniform grid batch,2*batch,...; got {list(k_grid)}"
        )
    train, test, _ = domain_paths(domain_dir)
    points: list[CurvePoint] = []
    for rep in range(reps):
        # Fresh seed per repetition: the initial random batch differs too.
        seed = base_seed + rep
        points.extend(
            al_loop(
                strategy,
                train,
                test,
                cfg,
                iterations=len(k_grid),
                batch=batch,
                seed=seed,
                workdir=Path(workdir) / f"{strategy}_rep{rep}",
                selector_cmd=selector_cmd,
            )
        )
    return points


def _mean_by_k(rows: list[CurveSummary], strategy: str) -> dict[int, float]:
    return {r.k: r.mean_f1 for r in rows if r.strategy == strategy}


def directional_report(points, reference: Optional[dict] = None) -> str:
    """Compare strategy curves; measured gaps next to reference numbers."""
    rows = summarize(points)
    strategies = sorted({r.strategy for r in rows})
    lines = [f"strategies: {', '.join(strategies)}"]
    rps = _mean_by_k(rows, "ratio-penalty")
    alr = _mean_by_k(rows, "alr")
    rnd = _mean_by_k(rows, "random")
    alc = _mean_by_k(rows, "alc")

    def mean(values):
        values = list(values)
        return sum(values) / len(values) if values else float("nan")

    if rps and alr:
        shared = sorted(set(rps) & set(alr))
        gaps = [rps[k] - alr[k] for k in shared]
        wins = sum(1 for g in gaps if g >= 0)
        lines.append(
            f"ratio-penalty vs alr: mean gap {mean(gaps):+.2f} F1 over k={shared}, "
            f"rps >= alr at {wins}/{len(shared)} grid points"
        )
        if 10 in rps and 10 in alr and alr[10] > 0:
            rel = (rps[10] - alr[10]) / alr[10]
            lines.append(f"  relative improvement at k=10: {rel:+.1%}")
    if rps and rnd:
        shared = sorted(set(rps) & set(rnd))
        wins = sum(1 for k in shared if rps[k] >= rnd[k])
        lines.append(
            f"ratio-penalty vs random: mean gap "
            f"{mean(rps[k] - rnd[k] for k in shared):+.2f} F1, "
            f"rps >= random at {wins}/{len(shared)} grid points"
        )
    if alc and rnd:
        shared = sorted(set(alc) & set(rnd))
        lines.append(
            f"alc vs random: mean gap {mean(alc[k] - rnd[k] for k in shared):+.2f} F1 "
            f"(negative means alc underperforms)"
        )
    if reference:
        lines.append("reference values for comparison:")
        for key, value in reference.items():
            lines.append(f"  {key} = {value}")
    return "\n".join(lines)
