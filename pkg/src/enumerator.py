"""
WalkEnumerator class: exhaustive search over self-avoiding walks.
Computes the maximum walk length from a start (or between two cells) and
counts the walks achieving it. Ground truth for every other module.
"""

import os
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from src.exceptions import PreconditionError, ResourceLimitError
from src.grid_core import (
    Cell, GridSpec, MoveSet, Parity, Walk, cell_color, ordered_neighbors, symmetry_class,
)
from src.walk_io import walk_to_dict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationQuery:
    """Search request: walks from `start`, optionally ending exactly at `end`."""
    grid: GridSpec
    start: Cell
    end: Optional[Cell] = None
    collect_paths: bool = False
    limit: Optional[int] = None
    prune: bool = False

    def __post_init__(self):
        self.grid.require(self.start)
        if self.end is not None:
            self.grid.require(self.end)
            if self.end == self.start:
                raise PreconditionError("End cell must differ from start")
        if self.limit is not None and self.limit < 0:
            raise PreconditionError(f"Path limit must be non-negative, got {self.limit}")


@dataclass(frozen=True)
class EnumerationResult:
    """Maximum step count, how many walks reach it, and optionally those walks."""
    max_steps: int
    count_max_walks: int
    paths: Tuple[Walk, ...] = ()
    nodes_expanded: int = 0

    def merge(self, other: 'EnumerationResult', limit: Optional[int] = None) -> 'EnumerationResult':
        return merge_results(self, other, limit)

    def to_dict(self, query: EnumerationQuery) -> Dict:
        data = {'start': query.start.to_list()}
        if query.end is not None:
            data['end'] = query.end.to_list()
        data.update({
            'moves': query.grid.moves.value,
            'max_steps': self.max_steps,
            'count': self.count_max_walks,
            'nodes_expanded': self.nodes_expanded,
        })
        if query.collect_paths:
            data['paths'] = [walk_to_dict(walk) for walk in self.paths]
        return data


EMPTY_RESULT = EnumerationResult(max_steps=-1, count_max_walks=0)


def merge_results(a: EnumerationResult, b: EnumerationResult,
                  limit: Optional[int] = None) -> EnumerationResult:
    """
    Fold two subtree results: keep the larger maximum, add counts on ties.

    Associative, with EMPTY_RESULT as identity. Collected paths keep
    a-before-b order and are cut at `limit`.
    """
    nodes = a.nodes_expanded + b.nodes_expanded
    if a.max_steps > b.max_steps:
        return EnumerationResult(a.max_steps, a.count_max_walks, a.paths, nodes)
    if b.max_steps > a.max_steps:
        return EnumerationResult(b.max_steps, b.count_max_walks, b.paths, nodes)
    paths = a.paths + b.paths
    if limit is not None:
        paths = paths[:limit]
    return EnumerationResult(a.max_steps, a.count_max_walks + b.count_max_walks, paths, nodes)


class _Search:
    """Depth-first search over one grid with a bitmask of visited cells."""

    def __init__(self, grid: GridSpec, end: int, collect: bool, limit: Optional[int],
                 prune: bool, seed: Optional[int] = None):
        self.grid = grid
        self.end = end
        self.collect = collect
        self.limit = limit
        self.prune = prune
        self.rook = grid.moves is MoveSet.ROOK

        self.links: List[List[int]] = []
        self.masks: List[int] = []
        self.even_mask = 0
        rng = random.Random(seed) if seed is not None else None
        for i in range(grid.size):
            cell = grid.cell_at(i)
            links = [grid.index(other) for other in ordered_neighbors(grid, cell)]
            if rng is not None:
                rng.shuffle(links)
            self.links.append(links)
            self.masks.append(sum(1 << j for j in links))
            if cell_color(cell) is Parity.EVEN:
                self.even_mask |= 1 << i
        self.full = (1 << grid.size) - 1

        self.best = -1
        self.count = 0
        self.paths: List[List[int]] = []
        self.nodes = 0

    def run(self, prefix: Sequence[int]) -> Tuple[int, int, List[List[int]], int]:
        visited = 0
        for i in prefix:
            visited |= 1 << i
        self._dfs(list(prefix), visited)
        return self.best, self.count, self.paths, self.nodes

    def record(self, path: List[int]) -> None:
        steps = len(path) - 1
        if steps > self.best:
            self.best = steps
            self.count = 1
            self.paths = [list(path)] if self.collect and self.limit != 0 else []
        elif steps == self.best:
            self.count += 1
            if self.collect and (self.limit is None or len(self.paths) < self.limit):
                self.paths.append(list(path))

    def _dfs(self, path: List[int], visited: int) -> None:
        self.nodes += 1
        head = path[-1]
        if self.end < 0:
            self.record(path)
        elif head == self.end:
            self.record(path)
            return

        if self.prune and not self._can_tie(head, visited, len(path) - 1):
            return

        for nb in self.links[head]:
            if (visited >> nb) & 1:
                continue
            path.append(nb)
            self._dfs(path, visited | (1 << nb))
            path.pop()

    def _can_tie(self, head: int, visited: int, steps: int) -> bool:
        # Prune only subtrees that cannot reach the best length found so far.
        free = self.full & ~visited
        reach = seed = self.masks[head] & free
        while seed:
            grown = 0
            mask = seed
            while mask:
                low = mask & -mask
                grown |= self.masks[low.bit_length() - 1]
                mask ^= low
            seed = grown & free & ~reach
            reach |= seed

        end = self.end
        if end >= 0 and not (reach >> end) & 1:
            return False
        if not self.rook:
            return steps + reach.bit_count() >= self.best

        head_mask = self.even_mask if (self.even_mask >> head) & 1 else self.full & ~self.even_mask
        same = (reach & head_mask).bit_count()
        other = reach.bit_count() - same
        if end < 0:
            extra = 2 * same + 1 if other > same else 2 * other
        elif (head_mask >> end) & 1:
            extra = 2 * min(same, other)
        else:
            extra = 2 * min(same, other - 1) + 1
        return steps + extra >= self.best


def _run_prefix(task: Tuple) -> Tuple[int, int, List[List[int]], int]:
    """Process-pool entry point: search below one prefix."""
    n, moves, end, collect, limit, prune, seed, prefix = task
    search = _Search(GridSpec(n, MoveSet(moves)), end, collect, limit, prune, seed)
    return search.run(prefix)


@dataclass(frozen=True)
class ClassSummary:
    """Start cells related by a symmetry of the square, with their shared count."""
    representative: Cell
    members: Tuple[Cell, ...]
    max_steps: int
    count_per_start: int
    subtotal: int

    def to_dict(self) -> Dict:
        return {
            'representative': self.representative.to_list(),
            'members': [cell.to_list() for cell in self.members],
            'max_steps': self.max_steps,
            'count_per_start': self.count_per_start,
            'subtotal': self.subtotal,
        }


class WalkEnumerator:
    """Exhaustive walk search with resource guards and optional prefix-parallel execution."""

    def __init__(self, rook_max_n: Optional[int] = None, king_max_n: Optional[int] = None,
                 workers: Optional[int] = None, split_depth: Optional[int] = None,
                 neighbor_seed: Optional[int] = None):
        """
        Initialize WalkEnumerator.

        Args:
            rook_max_n: Largest rook grid side searched without --force (GRIDWALK_ROOK_MAX_N)
            king_max_n: Largest king grid side searched without --force (GRIDWALK_KING_MAX_N)
            workers: Process-pool size; 1 searches in-process (GRIDWALK_WORKERS)
            split_depth: Prefix depth for splitting the search tree (GRIDWALK_SPLIT_DEPTH)
            neighbor_seed: Shuffle neighbour expansion order with this seed
        """
        self.rook_max_n = rook_max_n or int(os.getenv('GRIDWALK_ROOK_MAX_N', '6'))
        self.king_max_n = king_max_n or int(os.getenv('GRIDWALK_KING_MAX_N', '5'))
        self.workers = workers or int(os.getenv('GRIDWALK_WORKERS', '1'))
        self.split_depth = split_depth if split_depth is not None else int(os.getenv('GRIDWALK_SPLIT_DEPTH', '1'))
        self.neighbor_seed = neighbor_seed

        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.split_depth < 0:
            raise ValueError(f"split_depth must be non-negative, got {self.split_depth}")

    def guard_limit(self, grid: GridSpec) -> int:
        return self.rook_max_n if grid.moves is MoveSet.ROOK else self.king_max_n

    def check_guard(self, grid: GridSpec, force: bool = False) -> None:
        """Raise ResourceLimitError when the grid exceeds the guard, unless forced."""
        limit = self.guard_limit(grid)
        if grid.n <= limit:
            return
        if not force:
            raise ResourceLimitError(grid.n, grid.moves.value, limit)
        logger.warning(f"Resource guard overridden: {grid.moves.value} grid of side {grid.n} "
                       f"(limit {limit})")

    def run(self, query: EnumerationQuery, force: bool = False) -> EnumerationResult:
        """
        Execute a query: sequentially, or split into prefixes when workers > 1.

        Args:
            query: What to search
            force: Search even when the grid exceeds the resource guard

        Returns:
            EnumerationResult for the query
        """
        grid = query.grid
        self.check_guard(grid, force)
        started = time.time()
        end = grid.index(query.end) if query.end is not None else -1
        start = grid.index(query.start)

        if self.workers > 1:
            best, count, paths, nodes = self._run_parallel(query, start, end)
        else:
            search = _Search(grid, end, query.collect_paths, query.limit, query.prune, self.neighbor_seed)
            best, count, paths, nodes = search.run([start])

        result = EnumerationResult(
            max_steps=best,
            count_max_walks=count,
            paths=tuple(Walk(grid, tuple(grid.cell_at(i) for i in path)) for path in paths),
            nodes_expanded=nodes,
        )
        target = f" -> {query.end}" if query.end is not None else ""
        logger.info(f"Enumerated {grid.n}x{grid.n} {grid.moves.value} from {query.start}{target}: "
                    f"max {result.max_steps}, count {result.count_max_walks}, "
                    f"{result.nodes_expanded} nodes in {time.time() - started:.3f}s")
        return result

    def _run_parallel(self, query: EnumerationQuery, start: int,
                      end: int) -> Tuple[int, int, List[List[int]], int]:
        grid = query.grid
        # The splitter records its own internal nodes; tasks cover everything below.
        splitter = _Search(grid, end, query.collect_paths, query.limit, False, self.neighbor_seed)
        prefixes: List[List[int]] = []
        self._split(splitter, [start], 1 << start, prefixes)
        logger.debug(f"Split search into {len(prefixes)} prefixes at depth {self.split_depth} "
                     f"over {self.workers} workers")

        tasks = [
            (grid.n, grid.moves.value, end, query.collect_paths, query.limit, query.prune,
             self.neighbor_seed, prefix)
            for prefix in prefixes
        ]
        merged = EnumerationResult(splitter.best, splitter.count,
                                   tuple(tuple(p) for p in splitter.paths), splitter.nodes)
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            for best, count, paths, nodes in executor.map(_run_prefix, tasks):
                merged = merge_results(merged, EnumerationResult(best, count, tuple(tuple(p) for p in paths),
                                                                 nodes), query.limit)
        return merged.max_steps, merged.count_max_walks, [list(p) for p in merged.paths], merged.nodes_expanded

    def _split(self, splitter: _Search, path: List[int], visited: int, prefixes: List[List[int]]) -> None:
        head = path[-1]
        if len(path) - 1 >= self.split_depth:
            prefixes.append(list(path))
            return
        splitter.nodes += 1
        if splitter.end < 0:
            splitter.record(path)
        elif head == splitter.end:
            splitter.record(path)
            return
        for nb in splitter.links[head]:
            if (visited >> nb) & 1:
                continue
            path.append(nb)
            self._split(splitter, path, visited | (1 << nb), prefixes)
            path.pop()

    def enumerate_from(self, query: EnumerationQuery, force: bool = False) -> EnumerationResult:
        """Longest walks from query.start with the end left free."""
        if query.end is not None:
            raise PreconditionError("enumerate_from takes an unconstrained end; use longest_between")
        return self.run(query, force)

    def longest_between(self, grid: GridSpec, a: Cell, b: Cell, collect_paths: bool = False,
                        limit: Optional[int] = None, prune: bool = False,
                        force: bool = False) -> EnumerationResult:
        """
        Longest walks with first cell `a` and last cell `b`.

        Args:
            grid: Grid to search
            a: First cell
            b: Last cell, different from `a`
            collect_paths: Return the maximum walks too
            limit: Cap on collected walks
            prune: Use count-preserving branch-and-bound
            force: Search even when the grid exceeds the resource guard

        Returns:
            EnumerationResult over walks a -> b
        """
        query = EnumerationQuery(grid, a, b, collect_paths, limit, prune)
        return self.run(query, force)

    def per_start_results(self, grid: GridSpec, prune: bool = False,
                          force: bool = False) -> Dict[Cell, EnumerationResult]:
        """enumerate_from for every start cell, in row-major order."""
        self.check_guard(grid, force)
        results = {}
        for cell in grid.cells():
            try:
                results[cell] = self.enumerate_from(EnumerationQuery(grid, cell, prune=prune), force)
            except Exception as e:
                logger.error(f"Enumeration from {cell} on {grid.n}x{grid.n} failed: {str(e)}")
                raise
        return results

    def total_max_walk_count(self, grid: GridSpec, prune: bool = False, force: bool = False) -> int:
        """Sum over all starts of the number of walks reaching that start's own maximum."""
        results = self.per_start_results(grid, prune, force)
        return sum(result.count_max_walks for result in results.values())

    def class_breakdown(self, grid: GridSpec, prune: bool = False,
                        force: bool = False) -> List[ClassSummary]:
        """
        Per-start counts grouped by symmetry class (corners, edges, centre, ...).

        Args:
            grid: Grid to search
            prune: Use count-preserving branch-and-bound
            force: Search even when the grid exceeds the resource guard

        Returns:
            One ClassSummary per class, ordered by representative
        """
        results = self.per_start_results(grid, prune, force)
        classes: Dict[Cell, List[Cell]] = {}
        for cell in results:
            classes.setdefault(symmetry_class(grid, cell), []).append(cell)

        summaries = []
        for representative in sorted(classes):
            members = tuple(classes[representative])
            counts = {results[cell].count_max_walks for cell in members}
            if len(counts) > 1:
                logger.warning(f"Symmetric starts of class {representative} disagree: {sorted(counts)}")
            head = results[representative]
            summaries.append(ClassSummary(
                representative=representative,
                members=members,
                max_steps=head.max_steps,
                count_per_start=head.count_max_walks,
                subtotal=sum(results[cell].count_max_walks for cell in members),
            ))
        return summaries


def move_options(grid: GridSpec, cells: Sequence[Cell]) -> int:
    """Number of unoccupied neighbours of the walk's last cell."""
    if not cells:
        raise PreconditionError("move_options needs at least one cell")
    occupied = set(cells)
    return sum(1 for other in ordered_neighbors(grid, cells[-1]) if other not in occupied)


def option_profile(walk: Walk) -> List[int]:
    """Move options available at each position of the walk, from the start onwards."""
    return [move_options(walk.grid, walk.cells[:k + 1]) for k in range(len(walk.cells))]
