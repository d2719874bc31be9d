import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sentpick import EmbeddingMatrix, build_similarity

# Collinear points with distances 5, 5 and 10: mean pairwise distance
# 40/6, concentration constant exactly 6/40 = 0.15. Points 0 and 2 are
# mirror images around point 1, so their coverage totals tie exactly.
THREE_POINTS = np.array([[0.0, 0.0], [3.0, 4.0], [6.0, 8.0]])


@pytest.fixture
def three_point_emb() -> EmbeddingMatrix:
    return EmbeddingMatrix(values=THREE_POINTS)


@pytest.fixture
def three_point_model(three_point_emb):
    return build_similarity(three_point_emb)


def random_embedding(rng: np.random.Generator, n: int, d: int) -> EmbeddingMatrix:
    return EmbeddingMatrix(values=rng.normal(size=(n, d)))


_VOCAB = (
    "find", "me", "a", "cheap", "nearby", "thai", "sushi", "place", "with",
    "parking", "open", "late", "tonight", "downtown", "best", "rated",
)


def synthetic_corpus_text(rng: np.random.Generator, n: int) -> str:
    """Tagged corpus text: n sentences, 3-9 tokens, sprinkled BIO spans."""
    blocks = []
    for _ in range(n):
        length = int(rng.integers(3, 10))
        tokens = [str(rng.choice(_VOCAB)) for _ in range(length)]
        tags = ["O"] * length
        if rng.random() < 0.7:
            start = int(rng.integers(0, length))
            tags[start] = "B-Cuisine"
            if start + 1 < length and rng.random() < 0.5:
                tags[start + 1] = "I-Cuisine"
        blocks.append("\n".join(f"{tok}\t{tag}" for tok, tag in zip(tokens, tags)))
    return "\n\n".join(blocks) + "\n"


def write_instance(tmp_path: Path, rng: np.random.Generator, n: int, d: int):
    """Write a matching (corpus, embeddings) pair; returns their paths."""
    corpus_path = tmp_path / "corpus.conll"
    corpus_path.write_text(synthetic_corpus_text(rng, n), encoding="utf-8")
    emb_path = tmp_path / "emb.txt"
    values = rng.normal(size=(n, d))
    rows = [f"{n} {d}"]
    rows.extend(" ".join(repr(float(v)) for v in row) for row in values)
    emb_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return corpus_path, emb_path
