"""Linear-chain CRF layer: exact log-likelihood and Viterbi decoding."""

from __future__ import annotations

import torch
from torch import nn


class LinearChainCRF(nn.Module):
    """First-order CRF over tag sequences.

    Scores a path as start[t_0] + sum emissions[i, t_i]
    + sum transitions[t_{i-1}, t_i] + end[t_last]; the partition function
    is computed with the forward algorithm in log space.
    """

    def __init__(self, num_tags: int):
        super().__init__()
        self.num_tags = num_tags
        self.start = nn.Parameter(torch.empty(num_tags))
        self.end = nn.Parameter(torch.empty(num_tags))
        self.transitions = nn.Parameter(torch.empty(num_tags, num_tags))
        for param in (self.start, self.end, self.transitions):
            nn.init.uniform_(param, -0.1, 0.1)

    def _path_score(self, emissions, tags, mask):
        batch, length, _ = emissions.shape
        score = self.start[tags[:, 0]] + emissions[:, 0].gather(
            1, tags[:, 0:1]
        ).squeeze(1)
        for t in range(1, length):
            step = (
                self.transitions[tags[:, t - 1], tags[:, t]]
                + emissions[:, t].gather(1, tags[:, t : t + 1]).squeeze(1)
            )
            score = score + step * mask[:, t]
        lengths = mask.sum(dim=1)
        last_tags = tags.gather(1, (lengths - 1).unsqueeze(1)).squeeze(1)
        return score + self.end[last_tags]

    def _log_partition(self, emissions, mask):
        batch, length, _ = emissions.shape
        alpha = self.start.unsqueeze(0) + emissions[:, 0]
        for t in range(1, length):
            scores = (
                alpha.unsqueeze(2)
                + self.transitions.unsqueeze(0)
                + emissions[:, t].unsqueeze(1)
            )
            advanced = torch.logsumexp(scores, dim=1)
            alpha = torch.where(mask[:, t].unsqueeze(1), advanced, alpha)
        return torch.logsumexp(alpha + self.end.unsqueeze(0), dim=1)

    def log_likelihood(self, emissions, tags, mask) -> torch.Tensor:
        """Per-sequence log p(tags | emissions); shape (batch,)."""
        return self._path_score(emissions, tags, mask) - self._log_partition(
            emissions, mask
        )

    @torch.no_grad()
    def decode(self, emissions, mask) -> list[list[int]]:
        """Most likely tag path per sequence (Viterbi)."""
        paths = []
        for b in range(emissions.shape[0]):
            length = int(mask[b].sum())
            scores = emissions[b, :length]
            viterbi = self.start + scores[0]
            backpointers = []
            for t in range(1, length):
                total = viterbi.unsqueeze(1) + self.transitions
                best, argbest = total.max(dim=0)
                viterbi = best + scores[t]
                backpointers.append(argbest)
            viterbi = viterbi + self.end
            tag = int(viterbi.argmax())
            path = [tag]
            for argbest in reversed(backpointers):
                tag = int(argbest[tag])
                path.append(tag)
            path.reverse()
            paths.append(path)
        return paths
