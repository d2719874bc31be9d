"""sentpick: rank unlabeled sentences by expected labeling utility.

Selection uses only the geometry of a sentence-embedding cloud: a
similarity model built from pairwise distances drives greedy ranking
strategies (ratio-penalty, coverage, linear-penalty) next to random,
length, and uncertainty-based batch baselines.
"""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    EmbeddingMatrix,
    Sentence,
    load_corpus,
    load_embeddings,
    subset_corpus,
    validate_pair,
    write_corpus,
)
from .errors import (
    ConfigError,
    CorpusError,
    DegenerateCloudError,
    PipelineError,
    SelectionError,
    SentpickError,
)
from .selector import (
    Ranking,
    SelectionState,
    UncertaintyRecord,
    rank_coverage,
    rank_length,
    rank_linear_penalty,
    rank_prefix,
    rank_random,
    rank_ratio_penalty,
    read_ranking,
    select_batch_alc,
    select_batch_alr,
    sentence_uncertainty,
    write_ranking,
)
from .simspace import (
    SimilarityModel,
    build_similarity,
    compute_beta,
    nearest_neighbors,
)
from .pipeline import (
    RunConfig,
    StrategySpec,
    export_tsne_input,
    load_run_config,
    run,
    verify_manifest,
)

__all__ = [
    "__version__",
    "Corpus",
    "EmbeddingMatrix",
    "Sentence",
    "load_corpus",
    "load_embeddings",
    "subset_corpus",
    "validate_pair",
    "write_corpus",
    "ConfigError",
    "CorpusError",
    "DegenerateCloudError",
    "PipelineError",
    "SelectionError",
    "SentpickError",
    "Ranking",
    "SelectionState",
    "UncertaintyRecord",
    "rank_coverage",
    "rank_length",
    "rank_linear_penalty",
    "rank_prefix",
    "rank_random",
    "rank_ratio_penalty",
    "read_ranking",
    "select_batch_alc",
    "select_batch_alr",
    "sentence_uncertainty",
    "write_ranking",
    "SimilarityModel",
    "build_similarity",
    "compute_beta",
    "nearest_neighbors",
    "RunConfig",
    "StrategySpec",
    "export_tsne_input",
    "load_run_config",
    "run",
    "verify_manifest",
]
