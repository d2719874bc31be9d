"""Ranking strategies over the ground set.

Every strategy emits a full permutation of sentence indices, most useful
first, so any k-prefix is a candidate training set without re-running:

* ``ratio-penalty``  greedy on coverage / (1 + similarity to chosen set)
* ``coverage``       descending total similarity to the whole ground set
* ``linear-penalty`` greedy on coverage - alpha * similarity to chosen set
* ``random``         seeded uniform permutation
* ``length``         descending token count

plus two batch acquisition functions driven by model uncertainty files:
``alc`` (top uncertainty) and ``alr`` (sampling proportional to
uncertainty). Ties everywhere break toward the ascending sentence index;
stochastic strategies take an explicit seed and are reproducible
bit-for-bit (numpy PCG64, recorded in the output header).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .corpus import Corpus
from .errors import SelectionError
from .simspace import SimilarityModel

RATIO_PENALTY = "ratio-penalty"
COVERAGE = "coverage"
LINEAR_PENALTY = "linear-penalty"
RANDOM = "random"
LENGTH = "length"
RANK_STRATEGIES = (RATIO_PENALTY, COVERAGE, LINEAR_PENALTY, RANDOM, LENGTH)

ALC = "alc"
ALR = "alr"
BATCH_STRATEGIES = (ALC, ALR)

# Strategies that need the similarity model (and therefore embeddings).
EMBEDDING_STRATEGIES = (RATIO_PENALTY, COVERAGE, LINEAR_PENALTY)

_RNG_NAME = "pcg64"

# Gain of a candidate given the running similarity-to-chosen sums. Both
# forms rank identically; the log form exists because monotone transforms
# of the gain must not change the greedy argmax at any step.
GainFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def ratio_penalty_gain(coverage: np.ndarray, chosen_sim: np.ndarray) -> np.ndarray:
    return coverage / (1.0 + chosen_sim)


def log_ratio_penalty_gain(coverage: np.ndarray, chosen_sim: np.ndarray) -> np.ndarray:
    return np.log(coverage) - np.log1p(chosen_sim)


def linear_penalty_gain(alpha: float) -> GainFn:
    def gain(coverage: np.ndarray, chosen_sim: np.ndarray) -> np.ndarray:
        return coverage - alpha * chosen_sim

    return gain


@dataclass(frozen=True)
class Ranking:
    """A full selection order plus the per-step winning scores."""

    strategy: str
    order: tuple[int, ...]
    scores: tuple[float, ...]
    seed: Optional[int] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    rng: Optional[str] = None

    def __post_init__(self) -> None:
        n = len(self.order)
        if len(self.scores) != n:
            raise SelectionError(
                f"{len(self.scores)} scores for {n} ranked indices"
            )
        if sorted(self.order) != list(range(n)):
            raise SelectionError("order is not a permutation of 0..n-1")

    @property
    def n(self) -> int:
        return len(self.order)


def rank_prefix(ranking: Ranking, k: int) -> list[int]:
    """First k chosen indices, in rank order."""
    if not 1 <= k <= ranking.n:
        raise SelectionError(f"prefix size k={k} out of range [1, {ranking.n}]")
    return list(ranking.order[:k])


@dataclass
class SelectionState:
    """Chosen set plus, for every candidate, its similarity sum to it."""

    chosen: list[int]
    denominators: np.ndarray

    @classmethod
    def initial(cls, n: int) -> "SelectionState":
        return cls(chosen=[], denominators=np.zeros(n, dtype=np.float64))

    def add(self, index: int, sim_row: np.ndarray) -> None:
        self.chosen.append(index)
        self.denominators = self.denominators + sim_row


def greedy_rank(
    model: SimilarityModel,
    gain: GainFn,
    strategy: str,
    alpha: Optional[float] = None,
) -> Ranking:
    """Greedy argmax loop shared by all marginal-gain strategies.

    At each step the gain of every remaining candidate is evaluated
    against the current state and the first maximum (lowest index on
    exact ties) is selected; similarity sums are then updated
    incrementally with the winner's similarity row.
    """
    n = model.n
    coverage = model.coverage_totals
    state = SelectionState.initial(n)
    available = np.ones(n, dtype=bool)
    order: list[int] = []
    scores: list[float] = []
    for _ in range(n):
        gains = np.where(available, gain(coverage, state.denominators), -np.inf)
        winner = int(np.argmax(gains))
        order.append(winner)
        scores.append(float(gains[winner]))
        available[winner] = False
        if len(order) < n:
            state.add(winner, model.row(winner))
    return Ranking(
        strategy=strategy,
        order=tuple(order),
        scores=tuple(scores),
        alpha=alpha,
        beta=model.beta,
    )


def rank_ratio_penalty(model: SimilarityModel) -> Ranking:
    """Greedy ranking by coverage divided by (1 + similarity to chosen)."""
    return greedy_rank(model, ratio_penalty_gain, RATIO_PENALTY)


def rank_linear_penalty(model: SimilarityModel, alpha: float) -> Ranking:
    """Greedy ranking by coverage minus alpha * similarity to chosen."""
    if alpha < 0:
        raise SelectionError(f"alpha must be >= 0, got {alpha}")
    return greedy_rank(model, linear_penalty_gain(alpha), LINEAR_PENALTY, alpha=alpha)


def rank_coverage(model: SimilarityModel) -> Ranking:
    """Sort by descending coverage total.

    The coverage gain of a sentence does not depend on what was already
    chosen, so this sort is the exact optimum for every prefix size, not
    just a greedy approximation.
    """
    totals = model.coverage_totals
    order = np.argsort(-totals, kind="stable")
    return Ranking(
        strategy=COVERAGE,
        order=tuple(int(i) for i in order),
        scores=tuple(float(totals[i]) for i in order),
        beta=model.beta,
    )


def rank_random(n: int, seed: int) -> Ranking:
    """Seeded uniform permutation (Fisher-Yates via numpy PCG64)."""
    if n < 1:
        raise SelectionError(f"ground-set size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    return Ranking(
        strategy=RANDOM,
        order=tuple(int(i) for i in order),
        scores=(0.0,) * n,
        seed=seed,
        rng=_RNG_NAME,
    )


def rank_length(corpus: Corpus) -> Ranking:
    """Sort by descending token count."""
    lengths = corpus.token_counts()
    order = np.argsort(-lengths, kind="stable")
    return Ranking(
        strategy=LENGTH,
        order=tuple(int(i) for i in order),
        scores=tuple(float(lengths[i]) for i in order),
    )


@dataclass(frozen=True)
class UncertaintyRecord:
    """Per-token top-label confidences for one sentence."""

    index: int
    token_probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.index < 0:
            raise SelectionError(f"sentence index must be >= 0, got {self.index}")
        for p in self.token_probs:
            if not 0.0 <= p <= 1.0:
                raise SelectionError(
                    f"sentence {self.index}: probability {p} outside [0, 1]"
                )


def sentence_uncertainty(record: UncertaintyRecord) -> float:
    """Mean least-confidence over the sentence's tokens: mean(1 - p)."""
    if not record.token_probs:
        raise SelectionError(f"sentence {record.index}: empty token_probs")
    return float(np.mean(1.0 - np.asarray(record.token_probs, dtype=np.float64)))


def _batch_candidates(
    uncertainties: Sequence[UncertaintyRecord],
    exclude: Iterable[int],
    batch: int,
) -> list[tuple[int, float]]:
    if batch < 1:
        raise SelectionError(f"batch size must be >= 1, got {batch}")
    seen: set[int] = set()
    for record in uncertainties:
        if record.index in seen:
            raise SelectionError(f"duplicate uncertainty record for index {record.index}")
        seen.add(record.index)
    excluded = set(exclude)
    candidates = [
        (record.index, sentence_uncertainty(record))
        for record in uncertainties
        if record.index not in excluded
    ]
    if len(candidates) < batch:
        raise SelectionError(
            f"batch size {batch} exceeds the {len(candidates)} remaining candidates"
        )
    return candidates


def select_batch_alc(
    uncertainties: Sequence[UncertaintyRecord],
    exclude: Iterable[int],
    batch: int,
) -> list[int]:
    """The ``batch`` most uncertain non-excluded sentences."""
    candidates = _batch_candidates(uncertainties, exclude, batch)
    candidates.sort(key=lambda item: (-item[1], item[0]))
    return [index for index, _ in candidates[:batch]]


def select_batch_alr(
    uncertainties: Sequence[UncertaintyRecord],
    exclude: Iterable[int],
    batch: int,
    seed: int,
) -> list[int]:
    """Sample ``batch`` distinct sentences proportionally to uncertainty.

    Draws are sequential without replacement: pick one index with
    probability u / (remaining mass), remove it, renormalize, repeat.
    Each draw inverts the cumulative weight function at a single uniform
    from a fresh seeded PCG64 stream, so results are reproducible across
    platforms.
    """
    candidates = _batch_candidates(uncertainties, exclude, batch)
    indices = np.array([index for index, _ in candidates], dtype=np.int64)
    weights = np.array([u for _, u in candidates], dtype=np.float64)
    rng = np.random.default_rng(seed)
    picked: list[int] = []
    for _ in range(batch):
        cumulative = np.cumsum(weights)
        total = cumulative[-1]
        if total <= 0.0:
            raise SelectionError(
                "uncertainty mass of the remaining candidates is zero; "
                "sampling distribution undefined"
            )
        draw = rng.random() * total
        pos = int(np.searchsorted(cumulative, draw, side="right"))
        pos = min(pos, len(indices) - 1)
        picked.append(int(indices[pos]))
        indices = np.delete(indices, pos)
        weights = np.delete(weights, pos)
    return picked


# ---------------------------------------------------------------------------
# File formats: ranking TSV, uncertainty JSONL, exclude lists.

_HEADER_FIELDS = ("strategy", "seed", "alpha", "beta", "rng", "n")


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def ranking_label(ranking: Ranking) -> str:
    """Filesystem-safe label identifying a strategy and its parameters."""
    label = ranking.strategy
    if ranking.alpha is not None:
        label += f"_alpha{ranking.alpha:g}"
    if ranking.seed is not None:
        label += f"_seed{ranking.seed}"
    return label


def format_ranking(ranking: Ranking) -> str:
    """Serialize: one '#' header of key=value fields, then rank/index/score rows."""
    meta = {
        "strategy": ranking.strategy,
        "seed": ranking.seed,
        "alpha": ranking.alpha,
        "beta": ranking.beta,
        "rng": ranking.rng,
        "n": ranking.n,
    }
    header = " ".join(f"{key}={_fmt(meta[key])}" for key in _HEADER_FIELDS)
    lines = [f"# {header}"]
    for rank, (index, score) in enumerate(zip(ranking.order, ranking.scores), start=1):
        lines.append(f"{rank}\t{index}\t{score!r}")
    return "\n".join(lines) + "\n"


def write_ranking(ranking: Ranking, path: str | Path) -> None:
    Path(path).write_text(format_ranking(ranking), encoding="utf-8")


def _parse_header_value(key: str, text: str):
    if text == "none":
        return None
    if key in ("seed", "n"):
        return int(text)
    if key in ("alpha", "beta"):
        return float(text)
    return text


def read_ranking(path: str | Path) -> Ranking:
    """Parse a ranking file written by :func:`write_ranking`."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#"):
        raise SelectionError(f"{path}: missing ranking header line")
    meta = {}
    for item in lines[0].lstrip("#").split():
        key, _, value = item.partition("=")
        meta[key] = _parse_header_value(key, value)
    rows = [line for line in lines[1:] if line.strip()]
    order: list[int] = []
    scores: list[float] = []
    for row in rows:
        fields = row.split("\t")
        if len(fields) != 3:
            raise SelectionError(f"{path}: malformed ranking row {row!r}")
        order.append(int(fields[1]))
        scores.append(float(fields[2]))
    declared = meta.get("n")
    if declared is not None and declared != len(order):
        raise SelectionError(
            f"{path}: header declares n={declared} but file has {len(order)} rows"
        )
    return Ranking(
        strategy=meta.get("strategy", ""),
        order=tuple(order),
        scores=tuple(scores),
        seed=meta.get("seed"),
        alpha=meta.get("alpha"),
        beta=meta.get("beta"),
        rng=meta.get("rng"),
    )


def read_uncertainties(path: str | Path) -> list[UncertaintyRecord]:
    """Parse JSONL records: {"index": i, "token_probs": [p1, ..., pk]}."""
    path = Path(path)
    records: list[UncertaintyRecord] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SelectionError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not isinstance(payload, dict) or "index" not in payload or "token_probs" not in payload:
            raise SelectionError(
                f"{path}:{lineno}: expected object with 'index' and 'token_probs'"
            )
        records.append(
            UncertaintyRecord(
                index=int(payload["index"]),
                token_probs=tuple(float(p) for p in payload["token_probs"]),
            )
        )
    return records


def write_uncertainties(records: Sequence[UncertaintyRecord], path: str | Path) -> None:
    lines = [
        json.dumps({"index": r.index, "token_probs": list(r.token_probs)})
        for r in records
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_index_list(path: str | Path) -> list[int]:
    """Parse an exclude/selection file: one sentence index per line."""
    path = Path(path)
    indices: list[int] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        text = line.strip()
        if not text:
            continue
        try:
            indices.append(int(text))
        except ValueError as exc:
            raise SelectionError(f"{path}:{lineno}: not an index: {text!r}") from exc
    return indices


def write_index_list(indices: Iterable[int], path: str | Path) -> None:
    Path(path).write_text(
        "".join(f"{index}\n" for index in indices), encoding="utf-8"
    )
