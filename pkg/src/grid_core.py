"""
Grid geometry shared by every GridWalk module.
Cells, directions, adjacency under rook and king moves, walk validation
and the checkerboard parity bound.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.exceptions import BoundsError, PreconditionError, WalkValidationError

logger = logging.getLogger(__name__)


class MoveSet(str, Enum):
    """Adjacency rule of a grid: 4-neighbour rook or 8-neighbour king."""
    ROOK = 'rook'
    KING = 'king'


class Parity(str, Enum):
    """Checkerboard color of a cell."""
    EVEN = 'even'
    ODD = 'odd'


class Direction(Enum):
    """Compass directions as (row delta, col delta); row 1 is the top row."""
    N = (-1, 0)
    NE = (-1, 1)
    E = (0, 1)
    SE = (1, 1)
    S = (1, 0)
    SW = (1, -1)
    W = (0, -1)
    NW = (-1, -1)

    @property
    def drow(self) -> int:
        return self.value[0]

    @property
    def dcol(self) -> int:
        return self.value[1]

    @property
    def is_diagonal(self) -> bool:
        return self.drow != 0 and self.dcol != 0

    @classmethod
    def parse(cls, text: str) -> 'Direction':
        """
        Parse a compass name such as 'N' or 'se'.

        Args:
            text: Direction name, case-insensitive

        Returns:
            Matching Direction
        """
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise PreconditionError(f"Unknown direction: {text!r}") from None


ROOK_DIRECTIONS: Tuple[Direction, ...] = (Direction.N, Direction.E, Direction.S, Direction.W)
KING_DIRECTIONS: Tuple[Direction, ...] = tuple(Direction)


@dataclass(frozen=True, order=True)
class Cell:
    """A 1-indexed (row, col) position."""
    row: int
    col: int

    def shifted(self, direction: Direction) -> 'Cell':
        return Cell(self.row + direction.drow, self.col + direction.dcol)

    def to_list(self) -> List[int]:
        return [self.row, self.col]

    @classmethod
    def parse(cls, text: str) -> 'Cell':
        """
        Parse 'row,col' as written on the command line.

        Args:
            text: Two comma-separated integers, e.g. '2,3'

        Returns:
            Parsed Cell
        """
        parts = text.split(',')
        if len(parts) != 2:
            raise PreconditionError(f"Expected 'row,col', got {text!r}")
        try:
            return cls(int(parts[0]), int(parts[1]))
        except ValueError:
            raise PreconditionError(f"Expected integer 'row,col', got {text!r}") from None

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


@dataclass(frozen=True)
class GridSpec:
    """An n x n arena of cells with its adjacency rule."""
    n: int
    moves: MoveSet = MoveSet.ROOK

    def __post_init__(self):
        if not isinstance(self.moves, MoveSet):
            try:
                object.__setattr__(self, 'moves', MoveSet(str(self.moves).lower()))
            except ValueError:
                raise PreconditionError(f"Unknown move set: {self.moves!r}") from None
        if not isinstance(self.n, int) or self.n < 2:
            raise PreconditionError(f"Grid side must be an integer >= 2, got {self.n!r}")

    @property
    def size(self) -> int:
        return self.n * self.n

    @property
    def directions(self) -> Tuple[Direction, ...]:
        return ROOK_DIRECTIONS if self.moves is MoveSet.ROOK else KING_DIRECTIONS

    def contains(self, cell: Cell) -> bool:
        return 1 <= cell.row <= self.n and 1 <= cell.col <= self.n

    def require(self, cell: Cell) -> Cell:
        """Return the cell, raising BoundsError when it is off the grid."""
        if not self.contains(cell):
            raise BoundsError(f"Cell {cell} is outside the {self.n}x{self.n} grid")
        return cell

    def cells(self) -> Iterator[Cell]:
        """All cells in row-major order."""
        for row in range(1, self.n + 1):
            for col in range(1, self.n + 1):
                yield Cell(row, col)

    def index(self, cell: Cell) -> int:
        """Bit position of a cell: (row - 1) * n + (col - 1)."""
        return (cell.row - 1) * self.n + (cell.col - 1)

    def cell_at(self, index: int) -> Cell:
        return Cell(index // self.n + 1, index % self.n + 1)

    def is_corner(self, cell: Cell) -> bool:
        return cell.row in (1, self.n) and cell.col in (1, self.n)

    def with_moves(self, moves: MoveSet) -> 'GridSpec':
        return GridSpec(self.n, moves)


@dataclass(frozen=True)
class Walk:
    """An ordered sequence of cells on a grid; see validate_walk for its invariants."""
    grid: GridSpec
    cells: Tuple[Cell, ...]

    def __post_init__(self):
        if not isinstance(self.cells, tuple):
            object.__setattr__(self, 'cells', tuple(self.cells))

    @classmethod
    def of(cls, grid: GridSpec, pairs: Iterable[Sequence[int]]) -> 'Walk':
        """Build a walk from (row, col) pairs."""
        return cls(grid, tuple(Cell(int(row), int(col)) for row, col in pairs))

    @property
    def steps(self) -> int:
        return len(self.cells) - 1

    @property
    def start(self) -> Cell:
        return self.cells[0]

    @property
    def end(self) -> Cell:
        return self.cells[-1]

    def reversed(self) -> 'Walk':
        return Walk(self.grid, tuple(reversed(self.cells)))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.cells)


class ViolationKind(str, Enum):
    EMPTY = 'empty'
    BOUNDS = 'bounds'
    REPEAT = 'repeat'
    NON_ADJACENT = 'non-adjacent step'


@dataclass(frozen=True)
class WalkViolation:
    index: int
    kind: ViolationKind
    cell: Optional[Cell]

    def __str__(self) -> str:
        where = f" at {self.cell}" if self.cell is not None else ""
        return f"{self.kind.value} violation at index {self.index}{where}"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_walk: ok, or the first violation found."""
    ok: bool
    violation: Optional[WalkViolation] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict:
        if self.ok:
            return {'ok': True}
        return {
            'ok': False,
            'index': self.violation.index,
            'violation': self.violation.kind.value,
            'cell': self.violation.cell.to_list() if self.violation.cell else None,
        }

    def __str__(self) -> str:
        return 'ok' if self.ok else str(self.violation)


class Symmetry(str, Enum):
    """The eight symmetries of the square."""
    IDENTITY = 'identity'
    ROTATE_90 = 'rotate90'
    ROTATE_180 = 'rotate180'
    ROTATE_270 = 'rotate270'
    FLIP_ROWS = 'flip_rows'
    FLIP_COLS = 'flip_cols'
    TRANSPOSE = 'transpose'
    ANTI_TRANSPOSE = 'anti_transpose'


def _check(grid: Optional[GridSpec], cell: Cell) -> None:
    if cell.row < 1 or cell.col < 1 or (grid is not None and not grid.contains(cell)):
        raise BoundsError(f"Cell {cell} is out of bounds")


def cell_color(cell: Cell, grid: Optional[GridSpec] = None) -> Parity:
    """
    Checkerboard color of a cell; (1,1) is even.

    Without a grid only the lower bound (row, col >= 1) is checked, so any
    positive cell gets a color. Pass the grid to reject cells beyond its side.

    Args:
        cell: Cell to color
        grid: Grid to bounds-check against, if any

    Returns:
        Parity.EVEN when row + col is even, else Parity.ODD
    """
    _check(grid, cell)
    return Parity.EVEN if (cell.row + cell.col) % 2 == 0 else Parity.ODD


def color_counts(grid: GridSpec) -> Dict[Parity, int]:
    """Sizes of the two color classes; even cells are the majority on odd grids."""
    even = (grid.size + 1) // 2
    return {Parity.EVEN: even, Parity.ODD: grid.size - even}


def ordered_neighbors(grid: GridSpec, cell: Cell) -> List[Cell]:
    """In-bounds neighbours of a cell in compass order (the search expansion order)."""
    grid.require(cell)
    result = []
    for direction in grid.directions:
        other = cell.shifted(direction)
        if grid.contains(other):
            result.append(other)
    return result


def neighbors(grid: GridSpec, cell: Cell) -> FrozenSet[Cell]:
    """All in-bounds cells adjacent to `cell` under the grid's move set."""
    return frozenset(ordered_neighbors(grid, cell))


def is_adjacent(grid: GridSpec, a: Cell, b: Cell) -> bool:
    grid.require(a)
    grid.require(b)
    drow, dcol = abs(a.row - b.row), abs(a.col - b.col)
    if grid.moves is MoveSet.ROOK:
        return drow + dcol == 1
    return max(drow, dcol) == 1


def validate_walk(walk: Walk) -> ValidationReport:
    """
    Check the straight-walk and non-overlapping hypotheses.

    Args:
        walk: Walk to check

    Returns:
        ValidationReport naming the first offending index, if any
    """
    if not walk.cells:
        return ValidationReport(False, WalkViolation(0, ViolationKind.EMPTY, None))

    seen = set()
    previous = None
    for index, cell in enumerate(walk.cells):
        if not walk.grid.contains(cell):
            return ValidationReport(False, WalkViolation(index, ViolationKind.BOUNDS, cell))
        if cell in seen:
            return ValidationReport(False, WalkViolation(index, ViolationKind.REPEAT, cell))
        if previous is not None and not is_adjacent(walk.grid, previous, cell):
            return ValidationReport(False, WalkViolation(index, ViolationKind.NON_ADJACENT, cell))
        seen.add(cell)
        previous = cell

    return ValidationReport(True)


def require_valid(walk: Walk) -> Walk:
    """Return the walk unchanged, raising WalkValidationError if it is invalid."""
    report = validate_walk(walk)
    if not report.ok:
        raise WalkValidationError(report)
    return walk


def parity_step_bound(grid: GridSpec, a: Cell, b: Optional[Cell] = None) -> int:
    """
    Upper bound on the steps of a self-avoiding walk from `a` (to `b`).

    Rook walks alternate colors, so the number of visited cells is capped
    by the color-class sizes. King grids are not bipartite and get the
    trivial n^2 - 1.

    Args:
        grid: Grid the walk lives on
        a: First cell
        b: Last cell, or None for a walk with only its start fixed

    Returns:
        Maximum possible number of steps
    """
    grid.require(a)
    if b is not None:
        grid.require(b)
    if grid.moves is MoveSet.KING:
        return grid.size - 1
    if b == a:
        return 0

    counts = color_counts(grid)
    own = counts[cell_color(a)]
    other = grid.size - own

    if b is None:
        visited = 2 * other + 1 if own > other else 2 * own
    elif cell_color(b) == cell_color(a):
        visited = 2 * min(own - 1, other) + 1
    else:
        visited = 2 * min(own, other)
    return visited - 1


def vertex_grid(grid: GridSpec) -> GridSpec:
    """Vertex walks on an n x n grid are cell walks on the (n+1) x (n+1) grid."""
    return GridSpec(grid.n + 1, grid.moves)


def transform_cell(grid: GridSpec, cell: Cell, symmetry: Symmetry) -> Cell:
    """Image of a cell under one of the square's symmetries."""
    grid.require(cell)
    m = grid.n + 1
    r, c = cell.row, cell.col
    images = {
        Symmetry.IDENTITY: (r, c),
        Symmetry.ROTATE_90: (c, m - r),
        Symmetry.ROTATE_180: (m - r, m - c),
        Symmetry.ROTATE_270: (m - c, r),
        Symmetry.FLIP_ROWS: (m - r, c),
        Symmetry.FLIP_COLS: (r, m - c),
        Symmetry.TRANSPOSE: (c, r),
        Symmetry.ANTI_TRANSPOSE: (m - c, m - r),
    }
    return Cell(*images[symmetry])


def transform_walk(walk: Walk, symmetry: Symmetry) -> Walk:
    return Walk(walk.grid, tuple(transform_cell(walk.grid, cell, symmetry) for cell in walk.cells))


def symmetry_class(grid: GridSpec, cell: Cell) -> Cell:
    """Canonical representative of a cell's orbit: its smallest image."""
    return min(transform_cell(grid, cell, symmetry) for symmetry in Symmetry)
