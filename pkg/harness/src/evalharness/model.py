"""BiLSTM-CRF slot tagger with character-sensitive word representations."""

from __future__ import annotations

from typing import Optional

import torch
from torch import nn
from torch.nn.utils.rnn import pack_padded_sequence, pad_packed_sequence

from .config import TaggerConfig
from .crf import LinearChainCRF
from .data import Batch, Vocab


class BiLSTMTagger(nn.Module):
    """Word GloVe + char-BiLSTM representation, main BiLSTM, dense, CRF.

    The dense layer's per-token softmax is the confidence source for
    uncertainty-based acquisition; the CRF sits on top for decoding and
    the training objective. Word and character embeddings are fine-tuned.
    """

    def __init__(
        self,
        vocab: Vocab,
        cfg: TaggerConfig,
        word_vectors: Optional[torch.Tensor] = None,
    ):
        super().__init__()
        self.cfg = cfg
        self.word_emb = nn.Embedding(vocab.n_words, cfg.word_dim, padding_idx=0)
        if word_vectors is not None:
            if word_vectors.shape != self.word_emb.weight.shape:
                raise ValueError(
                    f"pretrained matrix {tuple(word_vectors.shape)} does not match "
                    f"embedding table {tuple(self.word_emb.weight.shape)}"
                )
            with torch.no_grad():
                self.word_emb.weight.copy_(word_vectors)
        self.char_emb = nn.Embedding(vocab.n_chars, cfg.char_dim, padding_idx=0)
        self.char_lstm = nn.LSTM(
            cfg.char_dim, cfg.char_hidden, batch_first=True, bidirectional=True
        )
        self.word_lstm = nn.LSTM(
            cfg.word_dim + 2 * cfg.char_hidden,
            cfg.word_hidden,
            batch_first=True,
            bidirectional=True,
        )
        self.dense = nn.Linear(2 * cfg.word_hidden, vocab.n_tags)
        self.crf = LinearChainCRF(vocab.n_tags)

    def _char_repr(self, char_ids: torch.Tensor) -> torch.Tensor:
        batch, length, chars = char_ids.shape
        flat = char_ids.view(batch * length, chars)
        lengths = (flat != 0).sum(dim=1).clamp(min=1)
        packed = pack_padded_sequence(
            self.char_emb(flat), lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        _, (hidden, _) = self.char_lstm(packed)
        # Final forward and backward states, concatenated per word.
        rep = torch.cat([hidden[0], hidden[1]], dim=1)
        return rep.view(batch, length, -1)

    def emissions(self, batch: Batch) -> torch.Tensor:
        """Dense-layer scores per token, shape (B, L, num_tags)."""
        words = self.word_emb(batch.word_ids)
        chars = self._char_repr(batch.char_ids)
        features = torch.cat([words, chars], dim=2)
        lengths = batch.mask.sum(dim=1).clamp(min=1)
        packed = pack_padded_sequence(
            features, lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        hidden, _ = self.word_lstm(packed)
        hidden, _ = pad_packed_sequence(
            hidden, batch_first=True, total_length=batch.mask.shape[1]
        )
        return self.dense(hidden)

    def loss(self, batch: Batch) -> torch.Tensor:
        log_likelihood = self.crf.log_likelihood(
            self.emissions(batch), batch.tag_ids, batch.mask
        )
        return -log_likelihood.mean()

    @torch.no_grad()
    def predict(self, batch: Batch) -> list[list[int]]:
        return self.crf.decode(self.emissions(batch), batch.mask)

    @torch.no_grad()
    def token_confidences(self, batch: Batch) -> list[list[float]]:
        """Max softmax of the dense layer per real token, per sentence."""
        probs = torch.softmax(self.emissions(batch), dim=2)
        top = probs.max(dim=2).values
        out = []
        for b in range(top.shape[0]):
            length = int(batch.mask[b].sum())
            out.append([float(p) for p in top[b, :length]])
        return out
