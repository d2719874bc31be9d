"""Training loop: fit the tagger on a labeled subset, track best test F1."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import torch

from .config import TaggerConfig
from .data import TaggedSentence, Vocab, batches, build_vocab, encode_batch, read_conll
from .f1 import span_f1
from .model import BiLSTMTagger
from .vectors import load_word_vectors

log = logging.getLogger(__name__)


@dataclass
class TrainResult:
    best_f1: float
    best_epoch: int
    epochs_run: int
    notes: str
    model: BiLSTMTagger = field(repr=False)
    vocab: Vocab = field(repr=False)


def evaluate(model: BiLSTMTagger, vocab: Vocab, sentences, cfg: TaggerConfig) -> float:
    """Span-level F1 of Viterbi predictions against gold tags."""
    model.eval()
    gold_seqs = []
    pred_seqs = []
    for chunk in batches(sentences, cfg.batch_size):
        batch = encode_batch([s.tokens for s in chunk], vocab, device=cfg.device)
        for sentence, path in zip(chunk, model.predict(batch)):
            gold_seqs.append(sentence.tags)
            pred_seqs.append([vocab.id2tag[t] for t in path])
    _, _, f1 = span_f1(gold_seqs, pred_seqs)
    return f1


def train_and_score(
    train_path: str | Path,
    test_path: str | Path,
    cfg: Optional[TaggerConfig] = None,
) -> TrainResult:
    """Train on the subset file, return the best test F1 seen during training.

    Test F1 is evaluated after every epoch; training stops at
    ``cfg.max_epochs`` or after ``cfg.patience`` epochs without a new
    best. The learning rate decays geometrically per epoch down to the
    configured floor.
    """
    cfg = cfg or TaggerConfig()
    train_sentences = read_conll(train_path)
    test_sentences = read_conll(test_path)
    torch.manual_seed(cfg.seed)

    vocab = build_vocab(train_sentences)
    word_vectors, glove_note = load_word_vectors(vocab, cfg)
    model = BiLSTMTagger(vocab, cfg, word_vectors).to(cfg.device)
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.learning_rate)

    best_f1 = 0.0
    best_epoch = 0
    epochs_without_improvement = 0
    epoch = 0
    for epoch in range(1, cfg.max_epochs + 1):
        lr = max(cfg.lr_floor, cfg.learning_rate * cfg.lr_decay ** (epoch - 1))
        for group in optimizer.param_groups:
            group["lr"] = lr
        model.train()
        for chunk in batches(train_sentences, cfg.batch_size):
            batch = encode_batch(
                [s.tokens for s in chunk],
                vocab,
                tag_seqs=[s.tags for s in chunk],
                device=cfg.device,
            )
            optimizer.zero_grad()
            loss = model.loss(batch)
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), cfg.grad_clip)
            optimizer.step()
        f1 = evaluate(model, vocab, test_sentences, cfg)
        if f1 > best_f1:
            best_f1 = f1
            best_epoch = epoch
            epochs_without_improvement = 0
        else:
            epochs_without_improvement += 1
        if epochs_without_improvement >= cfg.patience:
            break
    log.info(
        "trained on %d sentences: best F1 %.2f at epoch %d/%d",
        len(train_sentences), best_f1, best_epoch, epoch,
    )
    return TrainResult(
        best_f1=best_f1,
        best_epoch=best_epoch,
        epochs_run=epoch,
        notes=glove_note,
        model=model,
        vocab=vocab,
    )
