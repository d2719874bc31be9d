"""Pretrained word-vector loading with a download-and-cache fallback."""

from __future__ import annotations

import hashlib
import io
import logging
import urllib.request
import zipfile
from pathlib import Path
from typing import Optional

import torch

from .config import TaggerConfig
from .data import Vocab

log = logging.getLogger(__name__)


def _verify_sha256(path: Path, expected: str) -> None:
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    if digest != expected:
        raise ValueError(
            f"{path}: sha256 {digest} does not match pinned value {expected}"
        )


def _download_vectors(cfg: TaggerConfig, dim: int) -> Optional[Path]:
    cache = Path(cfg.glove_cache_dir).expanduser()
    cache.mkdir(parents=True, exist_ok=True)
    target = cache / f"glove.{dim}d.txt"
    if target.exists():
        return target
    archive = cache / Path(cfg.glove_url).name
    if not archive.exists():
        log.info("downloading %s", cfg.glove_url)
        urllib.request.urlretrieve(cfg.glove_url, archive)  # noqa: S310
    if cfg.glove_sha256:
        _verify_sha256(archive, cfg.glove_sha256)
    if archive.suffix == ".zip":
        with zipfile.ZipFile(archive) as zf:
            member = next(
                (name for name in zf.namelist() if name.endswith(f"{dim}d.txt")), None
            )
            if member is None:
                return None
            target.write_bytes(zf.read(member))
        return target
    return archive


def load_word_vectors(
    vocab: Vocab, cfg: TaggerConfig
) -> tuple[Optional[torch.Tensor], str]:
    """Embedding matrix initialized from pretrained vectors.

    Returns (matrix, note). When no vector source is reachable the
    matrix is None and the note records the random-init fallback; this
    is a warning, never an error.
    """
    if not cfg.use_glove:
        return None, "glove=disabled"
    source: Optional[Path] = None
    if cfg.glove_path:
        source = Path(cfg.glove_path).expanduser()
        if not source.exists():
            log.warning("pretrained vectors %s missing; using random init", source)
            return None, f"glove=missing({source})"
    else:
        try:
            source = _download_vectors(cfg, cfg.word_dim)
        except Exception as exc:  # network, checksum, archive layout
            log.warning("pretrained vector fetch failed (%s); using random init", exc)
            return None, f"glove=fetch-failed({type(exc).__name__})"
    if source is None:
        log.warning("no pretrained vectors found; using random init")
        return None, "glove=unavailable"

    generator = torch.Generator().manual_seed(cfg.seed)
    matrix = torch.empty(vocab.n_words, cfg.word_dim).uniform_(
        -0.1, 0.1, generator=generator
    )
    matrix[0].zero_()  # padding row
    hits = 0
    with io.open(source, encoding="utf-8") as handle:
        for line in handle:
            fields = line.rstrip().split(" ")
            if len(fields) != cfg.word_dim + 1:
                continue
            index = vocab.word2id.get(fields[0])
            if index is None:
                continue
            matrix[index] = torch.tensor([float(v) for v in fields[1:]])
            hits += 1
    return matrix, f"glove=loaded({hits}/{vocab.n_words})"
