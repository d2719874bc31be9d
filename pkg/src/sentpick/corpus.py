"""Sentence corpus and embedding file handling.

The ground set for every selection strategy is an ordered corpus of
tokenized sentences, optionally carrying BIO tags, paired with one
embedding vector per sentence. This module owns parsing, validation and
serialization of both; everything it returns is immutable and safe to
share across threads.

File formats
------------
conll-bio    one ``token<TAB>tag`` per line, blank line between sentences;
             a trailing blank line is optional.
plain-lines  one whitespace-tokenized sentence per line, no tags.
embeddings   header line ``n d``, then n lines of d space-separated reals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import CorpusError

CONLL_BIO = "conll-bio"
PLAIN_LINES = "plain-lines"
CORPUS_FORMATS = (CONLL_BIO, PLAIN_LINES)

_TAG_RE = re.compile(r"^(O|[BI]-\S+)$")


@dataclass(frozen=True)
class Sentence:
    """One tokenized sentence; ``tags`` is None for unlabeled data."""

    index: int
    tokens: tuple[str, ...]
    tags: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.index < 0:
            raise CorpusError(f"sentence index must be >= 0, got {self.index}")
        if not self.tokens:
            raise CorpusError(f"sentence {self.index}: tokens must be non-empty")
        if self.tags is not None:
            if len(self.tags) != len(self.tokens):
                raise CorpusError(
                    f"sentence {self.index}: {len(self.tags)} tags for "
                    f"{len(self.tokens)} tokens"
                )
            for tag in self.tags:
                if not _TAG_RE.match(tag):
                    raise CorpusError(
                        f"sentence {self.index}: invalid BIO tag {tag!r}"
                    )

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    """Ordered ground set of sentences. Indices are dense, 0..n-1."""

    sentences: tuple[Sentence, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.sentences:
            raise CorpusError("empty corpus")
        for position, sentence in enumerate(self.sentences):
            if sentence.index != position:
                raise CorpusError(
                    f"sentence at position {position} has index {sentence.index}"
                )

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __getitem__(self, index: int) -> Sentence:
        return self.sentences[index]

    @property
    def tagged(self) -> bool:
        return all(s.tags is not None for s in self.sentences)

    def token_counts(self) -> np.ndarray:
        return np.array([len(s) for s in self.sentences], dtype=np.int64)


@dataclass(frozen=True)
class EmbeddingMatrix:
    """n x d matrix of finite float64 values, one row per sentence."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise CorpusError(f"embedding matrix must be 2-D, got {values.ndim}-D")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise CorpusError(f"embedding matrix shape {values.shape} is degenerate")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise CorpusError(
                f"non-finite embedding value at row {bad[0]}, column {bad[1]}"
            )
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


def _build_sentence(index: int, tokens: list[str], tags: list[str]) -> Sentence:
    return Sentence(index=index, tokens=tuple(tokens), tags=tuple(tags))


def _parse_conll_bio(lines: Sequence[str], path: str) -> list[Sentence]:
    sentences: list[Sentence] = []
    tokens: list[str] = []
    tags: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if tokens:
                sentences.append(_build_sentence(len(sentences), tokens, tags))
                tokens, tags = [], []
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise CorpusError(
                f"{path}:{lineno}: expected 'token<TAB>tag', got {line!r}"
            )
        token, tag = fields
        if not _TAG_RE.match(tag):
            raise CorpusError(f"{path}:{lineno}: invalid BIO tag {tag!r}")
        tokens.append(token)
        tags.append(tag)
    if tokens:
        sentences.append(_build_sentence(len(sentences), tokens, tags))
    return sentences


def _parse_plain_lines(lines: Sequence[str], path: str) -> list[Sentence]:
    sentences: list[Sentence] = []
    for lineno, raw in enumerate(lines, start=1):
        tokens = raw.split()
        if not tokens:
            continue
        sentences.append(
            Sentence(index=len(sentences), tokens=tuple(tokens), tags=None)
        )
    return sentences


def load_corpus(path: str | Path, format: str = CONLL_BIO, name: str = "") -> Corpus:
    """Parse a corpus file in ``conll-bio`` or ``plain-lines`` format.

    Sentences are indexed in file order. Raises :class:`CorpusError` on an
    empty file or a malformed line, naming the line number.
    """
    if format not in CORPUS_FORMATS:
        raise CorpusError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise CorpusError(f"{path} is not valid UTF-8: {exc}") from exc
    lines = text.split("\n")
    if format == CONLL_BIO:
        sentences = _parse_conll_bio(lines, str(path))
    else:
        sentences = _parse_plain_lines(lines, str(path))
    if not sentences:
        raise CorpusError(f"empty corpus: {path}")
    return Corpus(sentences=tuple(sentences), name=name or path.stem)


def format_corpus(corpus: Corpus, format: str = CONLL_BIO) -> str:
    """Serialize a corpus back to text; inverse of :func:`load_corpus`."""
    if format == CONLL_BIO:
        blocks = []
        for sentence in corpus:
            if sentence.tags is None:
                raise CorpusError(
                    f"sentence {sentence.index} has no tags; cannot write conll-bio"
                )
            blocks.append(
                "\n".join(f"{tok}\t{tag}" for tok, tag in zip(sentence.tokens, sentence.tags))
            )
        return "\n\n".join(blocks) + "\n"
    if format == PLAIN_LINES:
        return "\n".join(" ".join(s.tokens) for s in corpus) + "\n"
    raise CorpusError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")


def write_corpus(corpus: Corpus, path: str | Path, format: str = CONLL_BIO) -> None:
    Path(path).write_text(format_corpus(corpus, format), encoding="utf-8")


def subset_corpus(corpus: Corpus, indices: Sequence[int], name: str = "") -> Corpus:
    """Materialize the given sentences (in the given order) as a new corpus.

    The slice is re-indexed 0..k-1 so it is a valid corpus on its own.
    """
    picked = []
    for position, original in enumerate(indices):
        if not 0 <= original < len(corpus):
            raise CorpusError(f"subset index {original} out of range for n={len(corpus)}")
        source = corpus[original]
        picked.append(Sentence(index=position, tokens=source.tokens, tags=source.tags))
    return Corpus(sentences=tuple(picked), name=name or corpus.name)


def load_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Parse an embedding file: header ``n d``, then n rows of d reals."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read embedding file {path}: {exc}") from exc
    lines = [line for line in text.split("\n") if line.strip()]
    if not lines:
        raise CorpusError(f"empty embedding file: {path}")
    header = lines[0].split()
    if len(header) != 2:
        raise CorpusError(f"{path}:1: header must be 'n d', got {lines[0]!r}")
    try:
        n, d = int(header[0]), int(header[1])
    except ValueError as exc:
        raise CorpusError(f"{path}:1: header must be two integers, got {lines[0]!r}") from exc
    if n < 1 or d < 1:
        raise CorpusError(f"{path}:1: header dimensions must be positive, got n={n} d={d}")
    body = lines[1:]
    if len(body) != n:
        raise CorpusError(
            f"{path}: header declares {n} rows but file has {len(body)} data rows"
        )
    values = np.empty((n, d), dtype=np.float64)
    for row, line in enumerate(body):
        fields = line.split()
        if len(fields) != d:
            raise CorpusError(
                f"{path}: row {row} has {len(fields)} values, expected {d}"
            )
        for col, fieldtext in enumerate(fields):
            try:
                value = float(fieldtext)
            except ValueError as exc:
                raise CorpusError(
                    f"{path}: row {row}, column {col}: not a number: {fieldtext!r}"
                ) from exc
            if not np.isfinite(value):
                raise CorpusError(
                    f"{path}: row {row}, column {col}: non-finite value {fieldtext!r}"
                )
            values[row, col] = value
    return EmbeddingMatrix(values=values)


def format_embeddings(emb: EmbeddingMatrix) -> str:
    rows = [f"{emb.rows} {emb.dim}"]
    for row in emb.values:
        rows.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(rows) + "\n"


def write_embeddings(emb: EmbeddingMatrix, path: str | Path) -> None:
    Path(path).write_text(format_embeddings(emb), encoding="utf-8")


def validate_pair(corpus: Corpus, emb: EmbeddingMatrix) -> None:
    """Check that the embedding matrix covers the corpus one row per sentence."""
    if emb.rows != len(corpus):
        raise CorpusError(
            f"corpus has {len(corpus)} sentences but embedding matrix has "
            f"{emb.rows} rows"
        )
