"""Emit per-token top-label confidences in the selection engine's JSONL format."""

from __future__ import annotations

import json
from pathlib import Path

from .config import TaggerConfig
from .data import Vocab, batches, encode_batch
from .model import BiLSTMTagger


def sentence_confidences(
    model: BiLSTMTagger, vocab: Vocab, token_seqs, cfg: TaggerConfig
) -> list[list[float]]:
    """Max dense-layer softmax per token for every sentence, pool order."""
    model.eval()
    confidences: list[list[float]] = []
    for chunk in batches(token_seqs, cfg.batch_size):
        batch = encode_batch(list(chunk), vocab, device=cfg.device)
        confidences.extend(model.token_confidences(batch))
    return confidences


def write_uncertainty_file(token_probs_per_sentence, path: str | Path) -> None:
    """One {"index": i, "token_probs": [...]} object per line."""
    lines = [
        json.dumps({"index": i, "token_probs": [float(p) for p in probs]})
        for i, probs in enumerate(token_probs_per_sentence)
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_uncertainties(
    model: BiLSTMTagger,
    vocab: Vocab,
    token_seqs,
    cfg: TaggerConfig,
    path: str | Path,
) -> None:
    write_uncertainty_file(sentence_confidences(model, vocab, token_seqs, cfg), path)
