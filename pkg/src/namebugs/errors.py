"""Exception types shared across the package.

Every error raised on bad user input derives from InputContractError so the
CLI can map it to a single exit code; internal invariant violations derive
from InternalError instead.
"""


class NamebugsError(Exception):
    """Base class for all package-specific errors."""


class InputContractError(NamebugsError):
    """Malformed or out-of-contract input (exit code 2 at the CLI)."""


class InternalError(NamebugsError):
    """A violated internal invariant (exit code 3 at the CLI)."""


class LexError(InputContractError):
    """Source text that cannot be tokenized."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} at {line}:{column}")
        self.line = line
        self.column = column


class ParseError(InputContractError):
    """Token stream that cannot be parsed."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} at {line}:{column}")
        self.line = line
        self.column = column


class AstSchemaError(InputContractError):
    """External tree JSON that violates the documented schema."""


class UnknownToken(InputContractError):
    """A lookup for a token that has no usable embedding row."""


class CollisionExhaustion(InternalError):
    """Random binary embedding space too small for the vocabulary."""


class ChecksumMismatch(InputContractError):
    """An artifact's recorded checksum does not match its dependency."""


class InsufficientData(InputContractError):
    """Too few training examples to fit a detector."""


class EmptyCorpus(InputContractError):
    """A corpus with zero tokens where counts are required."""


class EmptyDataset(InputContractError):
    """An empty training dataset."""


class DimensionMismatch(InputContractError):
    """Vector or matrix dimensions disagree with model metadata."""


class NonFiniteLoss(InternalError):
    """Training produced NaN or infinite loss."""


class SpecError(InputContractError):
    """A corpus-generation spec referencing undefined pieces."""
