"""Curve points, mean/CI summaries, and figure rendering."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Two-sided 90% quantile of the standard normal.
Z90 = 1.6448536269514722


@dataclass(frozen=True)
class CurvePoint:
    """Best test F1 for one (strategy, subset size, repetition)."""

    strategy: str
    k: int
    seed: Optional[int]
    f1: float
    notes: str = ""

    def __post_init__(self) -> None:
        if not 0.0 <= self.f1 <= 100.0:
            raise ValueError(f"F1 must be in [0, 100], got {self.f1}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def write_points(points: Iterable[CurvePoint], path: str | Path, append: bool = False) -> None:
    path = Path(path)
    rows = [
        f"{p.strategy}\t{p.k}\t{'' if p.seed is None else p.seed}\t{p.f1!r}\t{p.notes}"
        for p in points
    ]
    header = "strategy\tk\tseed\tf1\tnotes\n"
    if append and path.exists():
        with path.open("a", encoding="utf-8") as handle:
            handle.write("\n".join(rows) + "\n")
    else:
        path.write_text(header + "\n".join(rows) + "\n", encoding="utf-8")


def read_points(path: str | Path) -> list[CurvePoint]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    points = []
    for line in lines:
        if not line.strip() or line.startswith("strategy\t"):
            continue
        strategy, k, seed, f1, *rest = line.split("\t")
        points.append(
            CurvePoint(
                strategy=strategy,
                k=int(k),
                seed=int(seed) if seed else None,
                f1=float(f1),
                notes=rest[0] if rest else "",
            )
        )
    return points


@dataclass(frozen=True)
class CurveSummary:
    strategy: str
    k: int
    reps: int
    mean_f1: float
    ci_half_width: float


def summarize(points: Iterable[CurvePoint]) -> list[CurveSummary]:
    """Mean and 90% normal-approximation CI half-width per (strategy, k).

    A single repetition (or identical repetitions) has zero half-width.
    """
    grouped: dict[tuple[str, int], list[float]] = {}
    for point in points:
        grouped.setdefault((point.strategy, point.k), []).append(point.f1)
    rows = []
    for (strategy, k), values in sorted(grouped.items()):
        m = len(values)
        mean = sum(values) / m
        if m > 1:
            variance = sum((v - mean) ** 2 for v in values) / (m - 1)
            half = Z90 * math.sqrt(variance) / math.sqrt(m)
        else:
            half = 0.0
        rows.append(CurveSummary(strategy, k, m, mean, half))
    return rows


def write_summary(rows: Iterable[CurveSummary], path: str | Path) -> None:
    lines = ["strategy\tk\treps\tmean_f1\tci90_half_width"]
    lines.extend(
        f"{r.strategy}\t{r.k}\t{r.reps}\t{r.mean_f1!r}\t{r.ci_half_width!r}"
        for r in rows
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def render_curves(rows: Iterable[CurveSummary], path: str | Path, title: str = "") -> None:
    """Mean F1 vs k per strategy, shaded 90% confidence bands."""
    by_strategy: dict[str, list[CurveSummary]] = {}
    for row in rows:
        by_strategy.setdefault(row.strategy, []).append(row)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for strategy, entries in sorted(by_strategy.items()):
        entries = sorted(entries, key=lambda r: r.k)
        ks = [r.k for r in entries]
        means = [r.mean_f1 for r in entries]
        ax.plot(ks, means, marker="o", label=strategy)
        lower = [r.mean_f1 - r.ci_half_width for r in entries]
        upper = [r.mean_f1 + r.ci_half_width for r in entries]
        ax.fill_between(ks, lower, upper, alpha=0.2)
    ax.set_xlabel("labeled sentences (k)")
    ax.set_ylabel("best test F1")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
