"""Active-learning loop: train, score the pool, acquire a new batch.

Batch acquisition is delegated to the selection engine's CLI through a
subprocess and exchanged via files; the harness never imports the
engine's internals.
"""

from __future__ import annotations

import logging
import subprocess
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .config import TaggerConfig
from .curves import CurvePoint
from .data import read_conll, write_conll
from .train import train_and_score
from .uncertainty import sentence_confidences, write_uncertainty_file

log = logging.getLogger(__name__)

# trainer(subset_path, test_path) -> (best_f1, per-pool-sentence token confidences)
Trainer = Callable[[Path, Path], tuple[float, list[list[float]]]]


def _default_trainer(cfg: TaggerConfig, pool_tokens) -> Trainer:
    def trainer(subset_path: Path, test_path: Path):
        result = train_and_score(subset_path, test_path, cfg)
        confidences = sentence_confidences(result.model, result.vocab, pool_tokens, cfg)
        return result.best_f1, confidences

    return trainer


def _run_select_batch(
    strategy: str,
    uncertainty_file: Path,
    exclude_file: Path,
    batch: int,
    output_file: Path,
    seed: Optional[int],
    selector_cmd: Sequence[str],
    iteration: int,
) -> list[int]:
    command = [
        *selector_cmd,
        "select-batch",
        "--strategy", strategy,
        "--uncertainty", str(uncertainty_file),
        "--exclude", str(exclude_file),
        "--batch", str(batch),
        "--output", str(output_file),
    ]
    if seed is not None:
        command.extend(["--seed", str(seed)])
    proc = subprocess.run(command, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(
            f"select-batch failed at iteration {iteration} "
            f"(exit {proc.returncode}): {proc.stderr.strip()}"
        )
    return [
        int(line)
        for line in output_file.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def al_loop(
    strategy: str,
    pool_path: str | Path,
    test_path: str | Path,
    cfg: Optional[TaggerConfig] = None,
    *,
    iterations: int = 10,
    batch: int = 10,
    seed: int = 0,
    workdir: str | Path,
    selector_cmd: Sequence[str] = ("sentpick",),
    trainer: Optional[Trainer] = None,
) -> list[CurvePoint]:
    """Run the train/acquire loop and return one curve point per iteration.

    The initial ``batch`` sentences are drawn uniformly (seeded); each
    subsequent iteration retrains on the grown pool, writes the model's
    pool uncertainties, and asks the selection engine for the next batch
    with the current pool as the exclusion set. Labeled pools are
    strictly nested across iterations.
    """
    if strategy not in ("alc", "alr"):
        raise ValueError(f"unknown acquisition strategy {strategy!r}")
    cfg = cfg or TaggerConfig()
    pool_path = Path(pool_path)
    test_path = Path(test_path)
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    pool = read_conll(pool_path)
    if iterations * batch > len(pool):
        raise ValueError(
            f"{iterations} iterations x batch {batch} exceeds pool size {len(pool)}"
        )
    pool_tokens = [s.tokens for s in pool]
    if trainer is None:
        trainer = _default_trainer(cfg, pool_tokens)

    rng = np.random.default_rng(seed)
    labeled = sorted(int(i) for i in rng.choice(len(pool), size=batch, replace=False))
    points: list[CurvePoint] = []
    for iteration in range(iterations):
        k = len(labeled)
        subset_path = workdir / f"pool_k{k}.conll"
        write_conll([pool[i] for i in labeled], subset_path)
        f1, confidences = trainer(subset_path, test_path)
        points.append(CurvePoint(strategy=strategy, k=k, seed=seed, f1=f1))
        log.info("%s iteration %d: k=%d F1=%.2f", strategy, iteration, k, f1)
        if iteration == iterations - 1:
            break
        if len(confidences) != len(pool):
            raise RuntimeError(
                f"trainer returned {len(confidences)} confidence rows "
                f"for a pool of {len(pool)}"
            )
        uncertainty_file = workdir / f"uncertainty_k{k}.jsonl"
        write_uncertainty_file(confidences, uncertainty_file)
        exclude_file = workdir / f"labeled_k{k}.txt"
        exclude_file.write_text(
            "".join(f"{i}\n" for i in labeled), encoding="utf-8"
        )
        picked = _run_select_batch(
            strategy,
            uncertainty_file,
            exclude_file,
            batch,
            workdir / f"batch_k{k}.txt",
            seed=None if strategy == "alc" else seed * 10_000 + iteration,
            selector_cmd=selector_cmd,
            iteration=iteration,
        )
        overlap = set(picked) & set(labeled)
        if overlap:
            raise RuntimeError(f"acquired batch overlaps the pool: {sorted(overlap)}")
        labeled = sorted(labeled + picked)
    return points
