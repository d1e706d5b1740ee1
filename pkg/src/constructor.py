"""
WalkConstructor class for building maximum-length walks on rook grids.
Serpentine paths, walks from any start with a chosen first direction,
and full-cover walks between two given cells.
"""

import os
import logging
import time
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Tuple

from src.exceptions import ConstructionError, PreconditionError
from src.grid_core import (
    Cell, Direction, GridSpec, MoveSet, Parity, ROOK_DIRECTIONS, Walk,
    cell_color, parity_step_bound, validate_walk,
)

logger = logging.getLogger(__name__)

# Peeling preference order.
SIDES: Tuple[Direction, ...] = ROOK_DIRECTIONS

_OPPOSITE = {
    Direction.N: Direction.S,
    Direction.S: Direction.N,
    Direction.E: Direction.W,
    Direction.W: Direction.E,
}


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class ConstructionRequest:
    """What to build: a walk from `start`, optionally with a fixed first step and end."""
    grid: GridSpec
    start: Cell
    first_direction: Optional[Direction] = None
    target: Optional[Cell] = None

    def __post_init__(self):
        if self.grid.moves is not MoveSet.ROOK:
            raise PreconditionError("Walk construction is defined on rook grids only")
        self.grid.require(self.start)

        if self.first_direction is not None:
            if self.first_direction not in ROOK_DIRECTIONS:
                raise PreconditionError(f"Direction {self.first_direction.name} is not a rook move")
            if not self.grid.contains(self.start.shifted(self.first_direction)):
                raise PreconditionError(
                    f"First direction {self.first_direction.name} leaves the grid from {self.start}"
                )

        if self.target is not None:
            self.grid.require(self.target)
            if self.target == self.start:
                raise PreconditionError("Target must differ from start")

    @property
    def first_cell(self) -> Optional[Cell]:
        if self.first_direction is None:
            return None
        return self.start.shifted(self.first_direction)


@dataclass(frozen=True)
class _Region:
    """Inclusive rectangle of rows top..bottom and columns left..right."""
    top: int
    bottom: int
    left: int
    right: int

    @property
    def height(self) -> int:
        return self.bottom - self.top + 1

    @property
    def width(self) -> int:
        return self.right - self.left + 1

    @property
    def area(self) -> int:
        return self.height * self.width

    def contains(self, cell: Cell) -> bool:
        return self.top <= cell.row <= self.bottom and self.left <= cell.col <= self.right

    def cells(self) -> Iterator[Cell]:
        for row in range(self.top, self.bottom + 1):
            for col in range(self.left, self.right + 1):
                yield Cell(row, col)

    def span(self, side: Direction) -> int:
        return self.height if side in (Direction.N, Direction.S) else self.width

    def split(self, side: Direction) -> Tuple['_Region', '_Region']:
        """Cut a two-wide strip off the given side; returns (strip, rest)."""
        if side is Direction.N:
            return (_Region(self.top, self.top + 1, self.left, self.right),
                    _Region(self.top + 2, self.bottom, self.left, self.right))
        if side is Direction.S:
            return (_Region(self.bottom - 1, self.bottom, self.left, self.right),
                    _Region(self.top, self.bottom - 2, self.left, self.right))
        if side is Direction.W:
            return (_Region(self.top, self.bottom, self.left, self.left + 1),
                    _Region(self.top, self.bottom, self.left + 2, self.right))
        return (_Region(self.top, self.bottom, self.right - 1, self.right),
                _Region(self.top, self.bottom, self.left, self.right - 2))

    def corners(self) -> Tuple[Cell, ...]:
        return (Cell(self.top, self.left), Cell(self.top, self.right),
                Cell(self.bottom, self.left), Cell(self.bottom, self.right))

    def color_compatible(self, s: Cell, t: Cell) -> bool:
        """Necessary color condition for a full-cover path s -> t (sufficient when both sides >= 4)."""
        if self.area % 2 == 0:
            return cell_color(s) != cell_color(t)
        majority = cell_color(Cell(self.top, self.left))
        return cell_color(s) == majority and cell_color(t) == majority

    def __str__(self) -> str:
        return f"rows {self.top}-{self.bottom} x cols {self.left}-{self.right}"


class _RegionSearch:
    """Pruned depth-first search for walks of a given length inside one rectangle."""

    def __init__(self, region: _Region):
        self.region = region
        self.cells: List[Cell] = list(region.cells())
        self.index: Dict[Cell, int] = {cell: i for i, cell in enumerate(self.cells)}
        self.links: List[List[int]] = []
        self.masks: List[int] = []
        self.even_mask = 0

        for i, cell in enumerate(self.cells):
            row_links = []
            mask = 0
            for direction in ROOK_DIRECTIONS:
                other = cell.shifted(direction)
                if region.contains(other):
                    j = self.index[other]
                    row_links.append(j)
                    mask |= 1 << j
            self.links.append(row_links)
            self.masks.append(mask)
            if cell_color(cell) is Parity.EVEN:
                self.even_mask |= 1 << i

        self.full = (1 << len(self.cells)) - 1

    def first(self, start: Cell, end: Optional[Cell] = None, first: Optional[Cell] = None,
              goal: Optional[int] = None) -> Optional[List[Cell]]:
        return next(self.paths(start, end, first, goal), None)

    def paths(self, start: Cell, end: Optional[Cell] = None, first: Optional[Cell] = None,
              goal: Optional[int] = None) -> Iterator[List[Cell]]:
        """
        Yield walks of exactly `goal` cells (default: all cells) in deterministic order.

        Args:
            start: First cell
            end: Required last cell, if any
            first: Required second cell, if any
            goal: Number of cells the walk must visit

        Yields:
            Walks as lists of cells
        """
        goal = goal or len(self.cells)
        s = self.index[start]
        t = self.index[end] if end is not None else -1
        f = self.index[first] if first is not None else -1
        if first is not None and not (self.masks[s] >> f) & 1:
            return
        path = [s]
        for found in self._extend(path, 1 << s, t, f, goal, goal == len(self.cells)):
            yield [self.cells[i] for i in found]

    def _extend(self, path: List[int], visited: int, t: int, f: int, goal: int,
                hamiltonian: bool) -> Iterator[List[int]]:
        head = path[-1]
        length = len(path)
        if length == goal:
            if t < 0 or head == t:
                yield list(path)
            return
        if head == t:
            return
        if not self._viable(head, visited, length, t, goal, hamiltonian):
            return

        candidates = []
        for order, nb in enumerate(self.links[head]):
            if (visited >> nb) & 1:
                continue
            if length == 1 and f >= 0 and nb != f:
                continue
            if nb == t and length + 1 < goal:
                continue
            onward = (self.masks[nb] & ~visited).bit_count()
            candidates.append((onward, order, nb))
        candidates.sort()

        for _, _, nb in candidates:
            path.append(nb)
            yield from self._extend(path, visited | (1 << nb), t, f, goal, hamiltonian)
            path.pop()

    def _flood(self, seed: int, free: int) -> int:
        reach = seed
        frontier = seed
        while frontier:
            grown = 0
            for i in _bits(frontier):
                grown |= self.masks[i]
            frontier = grown & free & ~reach
            reach |= frontier
        return reach

    def _viable(self, head: int, visited: int, length: int, t: int, goal: int,
                hamiltonian: bool) -> bool:
        free = self.full & ~visited
        needed = goal - length
        reach = self._flood(self.masks[head] & free, free)
        if t >= 0 and not (reach >> t) & 1:
            return False

        head_mask = self.even_mask if (self.even_mask >> head) & 1 else self.full & ~self.even_mask
        same = (reach & head_mask).bit_count()
        other = reach.bit_count() - same
        if t < 0:
            extra = 2 * same + 1 if other > same else 2 * other
        elif (head_mask >> t) & 1:
            extra = 2 * min(same, other)
        else:
            extra = 2 * min(same, other - 1) + 1
        if extra < needed:
            return False

        if hamiltonian:
            if reach != free:
                return False
            open_ends = 0
            available = free | (1 << head)
            for i in _bits(free):
                if i == t:
                    continue
                if (self.masks[i] & available).bit_count() < 2:
                    if t >= 0:
                        return False
                    open_ends += 1
                    if open_ends > 1:
                        return False
        return True


class WalkConstructor:
    """Builds maximum walks deterministically and verifies every result."""

    def __init__(self, base_side: Optional[int] = None):
        """
        Initialize WalkConstructor.

        Args:
            base_side: Largest rectangle side solved by direct search,
                defaults to GRIDWALK_BASE_SIDE (5)
        """
        self.base_side = base_side or int(os.getenv('GRIDWALK_BASE_SIDE', '5'))
        if self.base_side < 5:
            raise ValueError("base_side must be at least 5 so every peeled remainder stays >= 4 wide")
        self._searches: Dict[_Region, _RegionSearch] = {}

    def serpentine(self, grid: GridSpec) -> Walk:
        """
        Row-by-row boustrophedon from (1,1): odd rows left to right, even rows right to left.

        Args:
            grid: Grid to cover

        Returns:
            Walk visiting all n^2 cells
        """
        cells = []
        for row in range(1, grid.n + 1):
            cols = range(1, grid.n + 1) if row % 2 == 1 else range(grid.n, 0, -1)
            cells.extend(Cell(row, col) for col in cols)
        walk = Walk(grid, tuple(cells))
        return self._verified(walk, ConstructionRequest(GridSpec(grid.n), Cell(1, 1)))

    def construct(self, request: ConstructionRequest) -> Optional[Walk]:
        """Dispatch on the request: with a target -> construct_between, else construct_from."""
        if request.target is not None:
            return self.construct_between(request)
        return self.construct_from(request)

    def construct_from(self, request: ConstructionRequest) -> Walk:
        """
        Longest walk from the request's start, honouring its first direction.

        Without a first direction, N, E, S, W are tried in order and the first
        walk reaching the start's maximum wins.

        Args:
            request: Start cell and optional first direction (target ignored)

        Returns:
            Verified walk
        """
        grid = request.grid
        bound = parity_step_bound(grid, request.start)

        if request.first_direction is None:
            best = None
            for direction in ROOK_DIRECTIONS:
                if not grid.contains(request.start.shifted(direction)):
                    continue
                try:
                    walk = self.construct_from(replace(request, first_direction=direction, target=None))
                except ConstructionError as e:
                    logger.debug(f"Heading {direction.name} from {request.start} failed: {str(e)}")
                    continue
                if best is None or walk.steps > best.steps:
                    best = walk
                if best.steps == bound:
                    break
            if best is None:
                raise ConstructionError(f"No walk constructed from {request.start} on {grid.n}x{grid.n}")
            return best

        started = time.time()
        nxt = request.first_cell
        full = _Region(1, grid.n, 1, grid.n)

        if grid.n <= self.base_side:
            search = self._search_for(full)
            path = None
            for goal in range(bound + 1, 1, -1):
                path = search.first(request.start, None, nxt, goal)
                if path is not None:
                    break
        else:
            path = self._large_from(grid, request.start, nxt, bound)

        if path is None:
            raise ConstructionError(f"No walk constructed from {request.start} heading "
                                    f"{request.first_direction.name} on {grid.n}x{grid.n}")

        walk = self._verified(Walk(grid, tuple(path)), replace(request, target=None))
        logger.info(f"Constructed {walk.steps}-step walk from {request.start} "
                    f"({request.first_direction.name}) on {grid.n}x{grid.n} "
                    f"in {time.time() - started:.3f}s")
        return walk

    def construct_between(self, request: ConstructionRequest) -> Optional[Walk]:
        """
        Walk covering every cell from request.start to request.target.

        Args:
            request: Start, target and optional first direction

        Returns:
            Verified walk of n^2 - 1 steps, or None when no such walk is constructed
        """
        if request.target is None:
            raise PreconditionError("construct_between needs a target")

        grid = request.grid
        started = time.time()
        path = self._solve(_Region(1, grid.n, 1, grid.n), request.start, request.target,
                           request.first_cell)
        if path is None:
            logger.info(f"No full-cover walk {request.start} -> {request.target} "
                        f"on {grid.n}x{grid.n}")
            return None

        walk = self._verified(Walk(grid, tuple(path)), request)
        if walk.steps != grid.size - 1:
            raise ConstructionError(f"Full-cover walk has {walk.steps} steps, expected {grid.size - 1}")
        logger.info(f"Constructed {walk.steps}-step walk {request.start} -> {request.target} "
                    f"on {grid.n}x{grid.n} in {time.time() - started:.3f}s")
        return walk

    def _search_for(self, region: _Region) -> _RegionSearch:
        if region not in self._searches:
            self._searches[region] = _RegionSearch(region)
        return self._searches[region]

    def _solve(self, region: _Region, s: Cell, t: Cell, first: Optional[Cell]) -> Optional[List[Cell]]:
        """Full-cover path of `region` from s to t whose second cell is `first` (if given)."""
        if not region.color_compatible(s, t):
            return None
        if first is not None and not region.contains(first):
            return None
        if self._corner_trapped(region, s, t, first):
            return None

        if region.height <= self.base_side and region.width <= self.base_side:
            return self._search_for(region).first(s, t, first)

        members = [s, t] + ([first] if first is not None else [])

        for side in SIDES:
            if region.span(side) - 2 < 4:
                continue
            strip, rest = region.split(side)
            if any(strip.contains(cell) for cell in members):
                continue
            logger.debug(f"Peeling free {side.name} strip off {region}")
            inner = self._solve(rest, s, t, first)
            if inner is not None:
                absorbed = self._absorb(inner, strip, rest, side, first is not None)
                if absorbed is not None:
                    return absorbed

        for side in SIDES:
            if region.span(side) - 2 < 4:
                continue
            strip, rest = region.split(side)
            if strip.contains(s) == strip.contains(t):
                continue
            logger.debug(f"Splitting endpoint {side.name} strip off {region}")
            path = self._split(strip, rest, side, s, t, first)
            if path is not None:
                return path

        return None

    @staticmethod
    def _corner_trapped(region: _Region, s: Cell, t: Cell, first: Optional[Cell]) -> bool:
        """True when a corner other than s and t has fewer than two usable links."""
        for corner in set(region.corners()):
            if corner in (s, t):
                continue
            usable = 0
            for direction in ROOK_DIRECTIONS:
                other = corner.shifted(direction)
                if not region.contains(other):
                    continue
                # s leaves only through `first` when one is fixed
                if other == s and first is not None and first != corner:
                    continue
                usable += 1
            if usable < 2:
                return True
        return False

    def _absorb(self, path: List[Cell], strip: _Region, rest: _Region, side: Direction,
                keep_first_edge: bool) -> Optional[List[Cell]]:
        """Detour one edge of `path` along the rest's border through the whole strip."""
        for k in range(len(path) - 1):
            if k == 0 and keep_first_edge:
                continue
            u, v = path[k], path[k + 1]
            if not (strip.contains(u.shifted(side)) and strip.contains(v.shifted(side))):
                continue
            detour = self._search_for(strip).first(u.shifted(side), v.shifted(side))
            if detour is not None:
                return path[:k + 1] + detour + path[k + 1:]
        return None

    def _split(self, strip: _Region, rest: _Region, side: Direction, s: Cell, t: Cell,
               first: Optional[Cell]) -> Optional[List[Cell]]:
        """Cover the strip holding one endpoint, then hand over to the rest."""
        inward = _OPPOSITE[side]

        if strip.contains(s):
            if first is not None and not strip.contains(first):
                return None
            for head in self._search_for(strip).paths(s, None, first):
                entry = head[-1].shifted(inward)
                if not rest.contains(entry) or entry == t:
                    continue
                tail = self._solve(rest, entry, t, None)
                if tail is not None:
                    return head + tail
            return None

        if first is not None and strip.contains(first):
            return None
        for back in self._search_for(strip).paths(t):
            exit_cell = back[-1].shifted(inward)
            if not rest.contains(exit_cell) or exit_cell == s:
                continue
            front = self._solve(rest, s, exit_cell, first)
            if front is not None:
                return front + list(reversed(back))
        return None

    def _large_from(self, grid: GridSpec, start: Cell, nxt: Cell, bound: int) -> Optional[List[Cell]]:
        full = _Region(1, grid.n, 1, grid.n)

        if bound == grid.size - 1:
            for target in self._target_order(grid, start):
                if target == nxt or not full.color_compatible(start, target):
                    continue
                path = self._solve(full, start, target, nxt)
                if path is not None:
                    return path
            return None

        # Minority start on an odd grid: cover the grid minus one border line, then
        # sweep that line from next to its corner, leaving the corner unvisited.
        n = grid.n
        for side in SIDES:
            line, rest = self._border_line(n, side)
            if not (rest.contains(start) and rest.contains(nxt)):
                continue
            inward = _OPPOSITE[side]
            for sweep in (line[1:], line[-2::-1]):
                target = sweep[0].shifted(inward)
                if target == nxt:
                    continue
                path = self._solve(rest, start, target, nxt)
                if path is not None:
                    return path + sweep
        return None

    @staticmethod
    def _border_line(n: int, side: Direction) -> Tuple[List[Cell], _Region]:
        """Cells of the border line on `side` in increasing order, and the region without it."""
        if side is Direction.N:
            return [Cell(1, k) for k in range(1, n + 1)], _Region(2, n, 1, n)
        if side is Direction.S:
            return [Cell(n, k) for k in range(1, n + 1)], _Region(1, n - 1, 1, n)
        if side is Direction.W:
            return [Cell(k, 1) for k in range(1, n + 1)], _Region(1, n, 2, n)
        return [Cell(k, n) for k in range(1, n + 1)], _Region(1, n, 1, n - 1)

    @staticmethod
    def _target_order(grid: GridSpec, start: Cell) -> List[Cell]:
        def key(cell: Cell):
            distance = abs(cell.row - start.row) + abs(cell.col - start.col)
            return (-distance, cell.row, cell.col)
        return sorted((cell for cell in grid.cells() if cell != start), key=key)

    def _verified(self, walk: Walk, request: ConstructionRequest) -> Walk:
        report = validate_walk(walk)
        if not report.ok:
            raise ConstructionError(f"Constructed walk is invalid: {report}")
        if walk.start != request.start:
            raise ConstructionError(f"Constructed walk starts at {walk.start}, not {request.start}")
        if request.target is not None and walk.end != request.target:
            raise ConstructionError(f"Constructed walk ends at {walk.end}, not {request.target}")
        if request.first_cell is not None and walk.cells[1] != request.first_cell:
            raise ConstructionError(f"Constructed walk does not head {request.first_direction.name}")
        if walk.steps > parity_step_bound(walk.grid, request.start, request.target):
            raise ConstructionError("Constructed walk exceeds the parity bound")
        return walk


def serpentine(grid: GridSpec) -> Walk:
    return WalkConstructor().serpentine(grid)


def construct_from(request: ConstructionRequest) -> Walk:
    return WalkConstructor().construct_from(request)


def construct_between(request: ConstructionRequest) -> Optional[Walk]:
    return WalkConstructor().construct_between(request)
