"""Corpus reading, vocabulary building, and tensor encoding.

The harness deliberately re-implements the small file-format readers it
needs instead of importing the selection engine: the two packages only
talk through files and subprocesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch

PAD = "<pad>"
UNK = "<unk>"


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple[str, ...]
    tags: tuple[str, ...]


def read_conll(path: str | Path) -> list[TaggedSentence]:
    """Read token<TAB>tag lines, blank-line separated sentences."""
    sentences: list[TaggedSentence] = []
    tokens: list[str] = []
    tags: list[str] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
        line = raw.rstrip()
        if not line:
            if tokens:
                sentences.append(TaggedSentence(tuple(tokens), tuple(tags)))
                tokens, tags = [], []
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'token<TAB>tag', got {line!r}")
        tokens.append(fields[0])
        tags.append(fields[1])
    if tokens:
        sentences.append(TaggedSentence(tuple(tokens), tuple(tags)))
    if not sentences:
        raise ValueError(f"empty corpus: {path}")
    return sentences


def write_conll(sentences, path: str | Path) -> None:
    blocks = [
        "\n".join(f"{tok}\t{tag}" for tok, tag in zip(s.tokens, s.tags))
        for s in sentences
    ]
    Path(path).write_text("\n\n".join(blocks) + "\n", encoding="utf-8")


def read_plain(path: str | Path) -> list[tuple[str, ...]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [tuple(line.split()) for line in lines if line.strip()]


@dataclass
class Vocab:
    word2id: dict[str, int]
    char2id: dict[str, int]
    tag2id: dict[str, int]
    id2tag: list[str]

    @property
    def n_words(self) -> int:
        return len(self.word2id)

    @property
    def n_chars(self) -> int:
        return len(self.char2id)

    @property
    def n_tags(self) -> int:
        return len(self.tag2id)

    def word_id(self, token: str) -> int:
        # Unseen tokens map to UNK, never an error.
        return self.word2id.get(token, self.word2id[UNK])

    def char_id(self, ch: str) -> int:
        return self.char2id.get(ch, self.char2id[UNK])


def build_vocab(sentences) -> Vocab:
    word2id = {PAD: 0, UNK: 1}
    char2id = {PAD: 0, UNK: 1}
    tag2id: dict[str, int] = {}
    for sentence in sentences:
        for token in sentence.tokens:
            word2id.setdefault(token, len(word2id))
            for ch in token:
                char2id.setdefault(ch, len(char2id))
        for tag in sentence.tags:
            tag2id.setdefault(tag, len(tag2id))
    id2tag = [tag for tag, _ in sorted(tag2id.items(), key=lambda kv: kv[1])]
    return Vocab(word2id, char2id, tag2id, id2tag)


@dataclass
class Batch:
    word_ids: torch.Tensor  # (B, L)
    char_ids: torch.Tensor  # (B, L, C)
    mask: torch.Tensor      # (B, L) bool
    tag_ids: torch.Tensor   # (B, L); zeros where tags absent


def encode_batch(token_seqs, vocab: Vocab, tag_seqs=None, device: str = "cpu") -> Batch:
    """Pad and index a batch of token sequences (and optional tags)."""
    batch = len(token_seqs)
    max_len = max(len(seq) for seq in token_seqs)
    max_chars = max(max((len(t) for t in seq), default=1) for seq in token_seqs)
    word_ids = torch.zeros(batch, max_len, dtype=torch.long)
    char_ids = torch.zeros(batch, max_len, max_chars, dtype=torch.long)
    mask = torch.zeros(batch, max_len, dtype=torch.bool)
    tag_ids = torch.zeros(batch, max_len, dtype=torch.long)
    for b, seq in enumerate(token_seqs):
        for i, token in enumerate(seq):
            word_ids[b, i] = vocab.word_id(token)
            mask[b, i] = True
            for c, ch in enumerate(token):
                char_ids[b, i, c] = vocab.char_id(ch)
        if tag_seqs is not None:
            for i, tag in enumerate(tag_seqs[b]):
                # Tags outside the training tag set cannot be predicted;
                # they only occur in gold test data and are mapped to 0
                # here (the span-level scorer reads gold tags from text).
                tag_ids[b, i] = vocab.tag2id.get(tag, 0)
    return Batch(
        word_ids.to(device), char_ids.to(device), mask.to(device), tag_ids.to(device)
    )


def batches(items, size: int):
    for start in range(0, len(items), size):
        yield items[start : start + size]
