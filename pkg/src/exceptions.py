"""
Error hierarchy shared by every GridWalk module.
"""

from typing import Optional


class GridWalkError(Exception):
    """Base class for all GridWalk errors."""


class BoundsError(GridWalkError, ValueError):
    """A cell lies outside the grid it is used with."""


class PreconditionError(GridWalkError, ValueError):
    """A request violates an operation's precondition."""


class WrongParityError(PreconditionError):
    """An even-only or odd-only operation received the other parity."""


class ResourceLimitError(GridWalkError, RuntimeError):
    """Exhaustive search refused because the grid exceeds the active guard."""

    def __init__(self, n: int, moves: str, limit: int):
        self.n = n
        self.moves = moves
        self.limit = limit
        super().__init__(
            f"{moves} grid of side {n} exceeds the resource guard (max side {limit}); "
            f"pass --force to override"
        )


class WalkValidationError(GridWalkError, ValueError):
    """A walk failed validation; carries the violation report."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class WalkFormatError(GridWalkError, ValueError):
    """Walk JSON could not be parsed into a Walk."""


class ChainError(GridWalkError, ValueError):
    """Consecutive chain segments do not share their junction cell."""

    def __init__(self, segment_index: int, message: Optional[str] = None):
        self.segment_index = segment_index
        super().__init__(message or f"segment {segment_index} does not start where segment "
                                    f"{segment_index - 1} ends")


class ConstructionError(GridWalkError, RuntimeError):
    """A constructed walk failed its own post-verification."""
