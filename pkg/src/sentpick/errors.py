"""Exception types shared across the package."""


class SentpickError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(SentpickError):
    """Malformed corpus or embedding input."""


class DegenerateCloudError(SentpickError):
    """All embeddings identical: the concentration constant is undefined."""


class SelectionError(SentpickError):
    """Invalid argument or state in a selection strategy."""


class ConfigError(SentpickError):
    """Invalid run configuration."""


class PipelineError(SentpickError):
    """A pipeline stage failed; the message names the stage."""
