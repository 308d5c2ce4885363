"""Exception types shared across the package."""


class SemalignError(Exception):
    """Base class for every error raised by this package."""


class InvalidMatrix(SemalignError):
    """Matrix input is empty, non-2D, or contains non-finite entries."""


class ZeroVector(SemalignError):
    """A vector that must be nonzero has zero norm."""


class ShapeError(SemalignError):
    """Array shapes are inconsistent with the operation's contract."""


class DegenerateInput(SemalignError):
    """Input carries no usable signal (too few samples, zero variance, empty)."""


class DegenerateBasis(SemalignError):
    """A semantic basis column collapsed to the zero vector."""


class VocabMismatch(SemalignError):
    """Two basis sets do not index the same vocabulary."""


class ConfigError(SemalignError):
    """A configuration value violates its invariants."""


class TokenRangeError(SemalignError):
    """A token index falls outside the model vocabulary."""


class EmptyMask(SemalignError):
    """No supervised positions to average over."""


class NumericalError(SemalignError):
    """A loss or gradient became non-finite."""


class RangeError(SemalignError):
    """A count argument exceeds the available range."""


class AlignmentError(SemalignError):
    """Two trace sets were not computed on the same token positions."""
