"""Tagger hyperparameters and pretrained-vector configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

# Canonical source for pretrained word vectors; set ``glove_sha256`` to
# pin the archive once downloaded and verified in your environment.
DEFAULT_GLOVE_URL = "https://nlp.stanford.edu/data/glove.6B.zip"


@dataclass
class TaggerConfig:
    """BiLSTM-CRF training configuration.

    The defaults are the reference operating point of this harness:
    300-d word embeddings, 50-d character embeddings, 200/100 hidden
    units for the main/character BiLSTMs, gradient clipping at norm 5,
    Adam starting at 0.005 with a 0.95 per-epoch geometric decay down to
    a 0.001 floor, and mini-batches of 20. Everything is overridable for
    desk-scale experiments.
    """

    word_dim: int = 300
    char_dim: int = 50
    word_hidden: int = 200
    char_hidden: int = 100
    grad_clip: float = 5.0
    learning_rate: float = 0.005
    lr_decay: float = 0.95
    lr_floor: float = 0.001
    batch_size: int = 20
    max_epochs: int = 100
    patience: int = 10
    seed: int = 0
    device: str = "cpu"

    # Pretrained word vectors: a local text file of "token v1 ... vd"
    # lines takes precedence; otherwise the URL is fetched into
    # ``glove_cache_dir`` (and checked against ``glove_sha256`` when
    # set). When neither route yields vectors the model falls back to
    # random initialization and records a warning in its output notes.
    glove_path: Optional[str] = None
    glove_url: str = DEFAULT_GLOVE_URL
    glove_sha256: Optional[str] = None
    glove_cache_dir: str = "~/.cache/evalharness"
    use_glove: bool = True

    def __post_init__(self) -> None:
        if self.word_dim < 1 or self.char_dim < 1:
            raise ValueError("embedding dimensions must be positive")
        if not 0 < self.lr_decay <= 1:
            raise ValueError("lr_decay must be in (0, 1]")
        if self.lr_floor > self.learning_rate:
            raise ValueError("lr_floor must not exceed the starting learning rate")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("batch_size and max_epochs must be positive")
