"""
Walks as planar polylines: polygon length, variation bound, and chains of
walks joined end to start with per-cell visit counts.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.constructor import ConstructionRequest, WalkConstructor
from src.exceptions import ChainError, PreconditionError
from src.grid_core import Cell, GridSpec, MoveSet, Walk, require_valid

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


@dataclass(frozen=True)
class Polyline:
    """Knot points in cell-side units; x grows with the column, y with the row (downwards)."""
    knots: Tuple[Point, ...]
    source: Optional[Walk] = None

    def __post_init__(self):
        if not self.knots:
            raise PreconditionError("A polyline needs at least one knot")
        for k in range(1, len(self.knots)):
            if self.knots[k] == self.knots[k - 1]:
                raise PreconditionError(f"Knots {k - 1} and {k} coincide")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.knots, dtype=float)

    def to_list(self) -> List[List[float]]:
        return [[x, y] for x, y in self.knots]

    def __len__(self) -> int:
        return len(self.knots)


def _knot(cell: Cell) -> Point:
    return (cell.col - 0.5, cell.row - 0.5)


def polyline_of_walk(walk: Walk) -> Polyline:
    """
    One knot per cell at the cell centre, in walk order.

    Args:
        walk: A valid walk

    Returns:
        Polyline carrying the walk as its source
    """
    require_valid(walk)
    return Polyline(tuple(_knot(cell) for cell in walk.cells), walk)


def path_length(polyline: Polyline) -> float:
    """Sum of Euclidean distances between consecutive knots; 0.0 for a single knot."""
    if len(polyline) < 2:
        return 0.0
    segments = np.diff(polyline.as_array(), axis=0)
    return float(np.linalg.norm(segments, axis=1).sum())


def step_breakdown(walk: Walk) -> Tuple[int, int]:
    """(straight steps, diagonal steps) of a walk."""
    diagonal = sum(
        1 for a, b in zip(walk.cells, walk.cells[1:])
        if a.row != b.row and a.col != b.col
    )
    return walk.steps - diagonal, diagonal


@dataclass(frozen=True)
class VariationReport:
    variation: float
    bound: int
    within_bound: bool

    def to_dict(self) -> Dict:
        return {'variation': self.variation, 'bound': self.bound, 'within_bound': self.within_bound}


def total_variation(polyline: Polyline, side: Optional[int] = None) -> VariationReport:
    """
    Total variation of a polygonal path (its length) checked against side^2.

    Args:
        polyline: Path to measure
        side: Grid side for the bound; taken from the source walk when omitted

    Returns:
        VariationReport
    """
    if side is None:
        if polyline.source is None:
            raise PreconditionError("total_variation needs a side when the polyline has no source walk")
        side = polyline.source.grid.n
    variation = path_length(polyline)
    bound = side * side
    return VariationReport(variation, bound, bool(variation < bound))


@dataclass(frozen=True)
class Chain:
    """Walks on one grid, each starting where the previous one ends."""
    segments: Tuple[Walk, ...]

    def __post_init__(self):
        if not isinstance(self.segments, tuple):
            object.__setattr__(self, 'segments', tuple(self.segments))
        if not self.segments:
            raise ChainError(0, "A chain needs at least one segment")
        grid = self.segments[0].grid
        for index, segment in enumerate(self.segments):
            if segment.grid != grid:
                raise ChainError(index, f"segment {index} lives on a different grid")
            if index > 0 and segment.start != self.segments[index - 1].end:
                raise ChainError(index)

    @property
    def grid(self) -> GridSpec:
        return self.segments[0].grid

    @property
    def is_closed(self) -> bool:
        return len(self.segments) > 1 and self.segments[-1].end == self.segments[0].start


@dataclass(frozen=True)
class ChainResult:
    polyline: Polyline
    visit_counts: Dict[Cell, int]

    def to_dict(self) -> Dict:
        return {
            'knots': self.polyline.to_list(),
            'length': path_length(self.polyline),
            'visit_counts': [
                {'cell': cell.to_list(), 'count': count}
                for cell, count in sorted(self.visit_counts.items())
            ],
        }


def concatenate(chain: Chain) -> ChainResult:
    """
    Join the segment polylines, keeping one knot per junction.

    Each junction cell counts once per junction; every other visit counts once.

    Args:
        chain: Chain of walks

    Returns:
        ChainResult with the joined polyline and visit counts
    """
    knots: List[Point] = []
    visits: Counter = Counter()
    for index, segment in enumerate(chain.segments):
        require_valid(segment)
        cells = segment.cells if index == 0 else segment.cells[1:]
        visits.update(cells)
        knots.extend(_knot(cell) for cell in cells)

    result = ChainResult(Polyline(tuple(knots)), dict(visits))
    logger.debug(f"Concatenated {len(chain.segments)} segments into {len(knots)} knots")
    return result


def chain_through(grid: GridSpec, waypoints: Sequence[Cell], constructor: Optional[WalkConstructor] = None,
                  closed: bool = False) -> Chain:
    """
    Chain full-cover walks between consecutive waypoints.

    Args:
        grid: Rook grid
        waypoints: At least two cells; consecutive ones must differ
        constructor: WalkConstructor to use (a default one when None)
        closed: Add a final segment back to the first waypoint

    Returns:
        Chain of constructed walks
    """
    if grid.moves is not MoveSet.ROOK:
        raise PreconditionError("chain_through builds rook walks only")
    points = list(waypoints)
    if len(points) < 2:
        raise PreconditionError("chain_through needs at least two waypoints")
    if closed:
        points.append(points[0])

    constructor = constructor or WalkConstructor()
    segments = []
    for index, (a, b) in enumerate(zip(points, points[1:])):
        walk = constructor.construct_between(ConstructionRequest(grid, a, target=b))
        if walk is None:
            raise ChainError(index, f"no full-cover walk from {a} to {b} for segment {index}")
        segments.append(walk)
    return Chain(tuple(segments))
