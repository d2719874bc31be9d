import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from evalharness import TaggerConfig

# Lexically determined toy domain: these cue words always carry their
# slot tag, everything else is O, so a tiny model can learn the task
# from a handful of sentences.
CUISINE = ("thai", "sushi", "pizza", "tapas")
LOCATION = ("downtown", "boston", "harbor")
FILLER = ("find", "me", "a", "place", "with", "good", "cheap", "open", "late", "best")


def toy_sentence(rng: np.random.Generator) -> tuple[list[str], list[str]]:
    length = int(rng.integers(4, 9))
    tokens = [str(rng.choice(FILLER)) for _ in range(length)]
    tags = ["O"] * length
    slots = [(CUISINE, "B-Cuisine"), (LOCATION, "B-Location")]
    for words, tag in slots:
        if rng.random() < 0.8:
            position = int(rng.integers(length))
            tokens[position] = str(rng.choice(words))
            tags[position] = tag
    return tokens, tags


def write_toy_corpus(path: Path, rng: np.random.Generator, n: int) -> None:
    blocks = []
    for _ in range(n):
        tokens, tags = toy_sentence(rng)
        blocks.append("\n".join(f"{t}\t{g}" for t, g in zip(tokens, tags)))
    path.write_text("\n\n".join(blocks) + "\n", encoding="utf-8")


def write_toy_embeddings(path: Path, rng: np.random.Generator, n: int, d: int = 4) -> None:
    values = rng.normal(size=(n, d))
    rows = [f"{n} {d}"] + [" ".join(repr(float(v)) for v in row) for row in values]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


@pytest.fixture
def tiny_config() -> TaggerConfig:
    # Small dims and a hotter learning rate keep CPU tests fast; the
    # architecture is unchanged.
    return TaggerConfig(
        word_dim=16,
        char_dim=8,
        word_hidden=16,
        char_hidden=8,
        batch_size=8,
        max_epochs=60,
        patience=60,
        learning_rate=0.02,
        use_glove=False,
        seed=0,
    )


@pytest.fixture
def toy_domain(tmp_path):
    rng = np.random.default_rng(7)
    write_toy_corpus(tmp_path / "train.conll", rng, 30)
    write_toy_corpus(tmp_path / "test.conll", rng, 12)
    write_toy_embeddings(tmp_path / "train.emb", rng, 30)
    return tmp_path
