"""evalharness: desk-scale evaluation of data-selection strategies.

Trains a BiLSTM-CRF slot tagger on selected training subsets, scores
span-level F1 on a held-out test set, drives uncertainty-based
active-learning loops through the selection engine's CLI, and renders
F1-vs-k curves with confidence bands.
"""

__version__ = "0.1.0"

from .config import TaggerConfig
from .curves import CurvePoint, CurveSummary, read_points, render_curves, summarize, write_points
from .data import TaggedSentence, build_vocab, read_conll, read_plain, write_conll
from .f1 import extract_spans, span_f1
from .loop import al_loop
from .model import BiLSTMTagger
from .protocol import directional_report, loop_curve, ranking_curve
from .train import TrainResult, evaluate, train_and_score
from .uncertainty import emit_uncertainties, sentence_confidences

__all__ = [
    "__version__",
    "TaggerConfig",
    "CurvePoint",
    "CurveSummary",
    "read_points",
    "render_curves",
    "summarize",
    "write_points",
    "TaggedSentence",
    "build_vocab",
    "read_conll",
    "read_plain",
    "write_conll",
    "extract_spans",
    "span_f1",
    "al_loop",
    "BiLSTMTagger",
    "directional_report",
    "loop_curve",
    "ranking_curve",
    "TrainResult",
    "evaluate",
    "train_and_score",
    "emit_uncertainties",
    "sentence_confidences",
]
