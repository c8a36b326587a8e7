"""Exception types raised across the pipeline."""


class BeliefMineError(Exception):
    """Base class for every error this package raises on bad input."""


class MalformedRecord(BeliefMineError):
    """A corpus line violates the record schema."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class DuplicateId(BeliefMineError):
    """Two corpus records share the same id."""

    def __init__(self, record_id: str, line_no: int):
        self.record_id = record_id
        self.line_no = line_no
        super().__init__(f"duplicate id {record_id!r} at line {line_no}")


class EmbeddingFormatError(BeliefMineError):
    """An embedding file line does not parse as 'word v1 .. vd'."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class EmptyVotes(BeliefMineError):
    """Vote resolution called with no votes."""


class InvalidRange(BeliefMineError):
    """An n-gram range does not satisfy 1 <= n_min <= n_max."""


class EmptyCorpus(BeliefMineError):
    """Vocabulary fitting called with no documents."""


class SingleClassCorpus(BeliefMineError):
    """Training data does not contain both belief classes."""


class EmptyTestSet(BeliefMineError):
    """Evaluation called with no test examples."""


class EmptyGraph(BeliefMineError):
    """Community detection called on a graph without edges."""


class EmptyText(BeliefMineError):
    """Parsing called on empty (or whitespace-only) text."""


class EmptyInput(BeliefMineError):
    """Median-string selection called on an empty list."""


class ClassMissing(BeliefMineError):
    """Structure-classifier training split lacks one of the two classes."""


class ConfigError(BeliefMineError):
    """A run configuration violates its invariants."""
