"""Span-level F1 for BIO tag sequences (exact-match entities)."""

from __future__ import annotations

from typing import Iterable, Sequence


def extract_spans(tags: Sequence[str]) -> set[tuple[str, int, int]]:
    """(label, start, end_exclusive) triples for maximal BIO spans.

    An I-tag that does not continue a span of the same label opens a new
    span, matching the conventional CoNLL evaluation treatment.
    """
    spans: set[tuple[str, int, int]] = set()
    label = None
    start = 0
    for i, tag in enumerate(tags):
        if tag.startswith("B-"):
            if label is not None:
                spans.add((label, start, i))
            label, start = tag[2:], i
        elif tag.startswith("I-"):
            if label != tag[2:]:
                if label is not None:
                    spans.add((label, start, i))
                label, start = tag[2:], i
        else:
            if label is not None:
                spans.add((label, start, i))
            label = None
    if label is not None:
        spans.add((label, start, len(tags)))
    return spans


def span_f1(
    gold_seqs: Iterable[Sequence[str]], pred_seqs: Iterable[Sequence[str]]
) -> tuple[float, float, float]:
    """(precision, recall, f1) in percent over exact-match spans."""
    tp = fp = fn = 0
    for gold_tags, pred_tags in zip(gold_seqs, pred_seqs, strict=True):
        gold = extract_spans(gold_tags)
        pred = extract_spans(pred_tags)
        tp += len(gold & pred)
        fp += len(pred - gold)
        fn += len(gold - pred)
    precision = 100.0 * tp / (tp + fp) if tp + fp else 0.0
    recall = 100.0 * tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)
