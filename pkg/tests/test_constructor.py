import pytest

from src.constructor import (
    ConstructionRequest, WalkConstructor, construct_between, construct_from, serpentine,
)
from src.exceptions import BoundsError, PreconditionError
from src.existence import claimed_yes_pairs, adjacent_pair_count
from src.grid_core import (
    Cell, Direction, GridSpec, MoveSet, ROOK_DIRECTIONS, is_adjacent, parity_step_bound, validate_walk,
)


def assert_walk(walk, start, steps, target=None, first=None):
    assert validate_walk(walk).ok
    assert walk.start == start
    assert walk.steps == steps
    if target is not None:
        assert walk.end == target
    if first is not None:
        assert walk.cells[1] == start.shifted(first)


def test_serpentine_small():
    walk = serpentine(GridSpec(2))
    assert walk.cells == (Cell(1, 1), Cell(1, 2), Cell(2, 2), Cell(2, 1))
    assert walk.steps == 3


@pytest.mark.parametrize('n,end', [(4, Cell(4, 1)), (5, Cell(5, 5)), (8, Cell(8, 1))])
def test_serpentine_ends(n, end):
    walk = serpentine(GridSpec(n))
    assert_walk(walk, Cell(1, 1), n * n - 1, target=end)


def test_serpentine_is_row_major_with_alternating_reversal():
    grid = GridSpec(6)
    cells = list(serpentine(grid).cells)
    rows = [cells[k:k + 6] for k in range(0, 36, 6)]
    unfolded = [c for i, row in enumerate(rows) for c in (row if i % 2 == 0 else row[::-1])]
    assert unfolded == list(grid.cells())


def test_construct_from_examples():
    assert_walk(construct_from(ConstructionRequest(GridSpec(4), Cell(2, 3), Direction.N)),
                Cell(2, 3), 15, first=Direction.N)
    assert_walk(construct_from(ConstructionRequest(GridSpec(5), Cell(1, 1), Direction.E)),
                Cell(1, 1), 24, first=Direction.E)
    assert_walk(construct_from(ConstructionRequest(GridSpec(3), Cell(1, 2), Direction.S)),
                Cell(1, 2), 7, first=Direction.S)


def test_construct_from_honours_each_direction_on_3x3():
    constructor = WalkConstructor()
    grid = GridSpec(3)
    # From the centre (majority color) every first move still allows a full cover.
    for direction in ROOK_DIRECTIONS:
        walk = constructor.construct_from(ConstructionRequest(grid, Cell(2, 2), direction))
        assert_walk(walk, Cell(2, 2), 8, first=direction)


def test_construct_from_without_direction_reaches_bound():
    constructor = WalkConstructor()
    grid = GridSpec(5)
    for start in (Cell(1, 2), Cell(3, 3), Cell(2, 4)):
        walk = constructor.construct_from(ConstructionRequest(grid, start))
        assert_walk(walk, start, parity_step_bound(grid, start))


@pytest.mark.parametrize('n,start,direction', [
    (6, Cell(3, 3), Direction.W),
    (6, Cell(1, 2), Direction.E),
    (7, Cell(1, 1), Direction.E),
    (7, Cell(4, 4), Direction.N),
    (7, Cell(1, 2), Direction.E),
    (7, Cell(3, 4), Direction.S),
])
def test_construct_from_large_grids(constructor, n, start, direction):
    grid = GridSpec(n)
    walk = constructor.construct_from(ConstructionRequest(grid, start, direction))
    assert_walk(walk, start, parity_step_bound(grid, start), first=direction)


def test_construct_between_even_example():
    walk = construct_between(ConstructionRequest(GridSpec(10), Cell(6, 3), target=Cell(6, 4)))
    assert_walk(walk, Cell(6, 3), 99, target=Cell(6, 4))


def test_construct_between_odd_examples(constructor):
    grid = GridSpec(5)
    walk = constructor.construct_between(ConstructionRequest(grid, Cell(1, 1), target=Cell(4, 4)))
    assert_walk(walk, Cell(1, 1), 24, target=Cell(4, 4))
    walk = constructor.construct_between(ConstructionRequest(grid, Cell(5, 1), target=Cell(1, 5)))
    assert_walk(walk, Cell(5, 1), 24, target=Cell(1, 5))


def test_construct_between_infeasible():
    request = ConstructionRequest(GridSpec(4), Cell(2, 2), target=Cell(2, 4))
    assert construct_between(request) is None


def test_construct_between_with_first_direction(constructor):
    request = ConstructionRequest(GridSpec(6), Cell(1, 1), Direction.S, Cell(1, 2))
    walk = constructor.construct_between(request)
    assert_walk(walk, Cell(1, 1), 35, target=Cell(1, 2), first=Direction.S)


def test_construct_dispatches_on_target(constructor):
    grid = GridSpec(4)
    assert constructor.construct(ConstructionRequest(grid, Cell(1, 1), target=Cell(1, 2))).end == Cell(1, 2)
    assert constructor.construct(ConstructionRequest(grid, Cell(1, 1), Direction.E)).steps == 15


def test_construct_between_is_deterministic(constructor):
    request = ConstructionRequest(GridSpec(8), Cell(4, 4), target=Cell(4, 5))
    assert constructor.construct_between(request) == WalkConstructor().construct_between(request)


def test_all_adjacent_pairs_on_4x4(constructor):
    grid = GridSpec(4)
    cells = list(grid.cells())
    pairs = [(a, b) for i, a in enumerate(cells) for b in cells[i + 1:] if is_adjacent(grid, a, b)]
    assert len(pairs) == adjacent_pair_count(4) == 24
    for a, b in pairs:
        walk = constructor.construct_between(ConstructionRequest(grid, a, target=b))
        assert_walk(walk, a, 15, target=b)


def test_claimed_pairs_on_5x5_are_constructed(constructor):
    grid = GridSpec(5)
    claims = claimed_yes_pairs(grid)
    assert claims
    for claim in claims:
        walk = constructor.construct_between(ConstructionRequest(grid, claim.a, target=claim.b))
        assert walk is not None, f"no walk for {claim.a}-{claim.b} ({claim.rule.value})"
        assert_walk(walk, claim.a, 24, target=claim.b)


@pytest.mark.parametrize('n', [6, 8])
def test_adjacent_claims_on_larger_even_grids(constructor, n):
    grid = GridSpec(n)
    for claim in claimed_yes_pairs(grid)[:6]:
        walk = constructor.construct_between(ConstructionRequest(grid, claim.a, target=claim.b))
        assert_walk(walk, claim.a, n * n - 1, target=claim.b)


@pytest.mark.parametrize('n,a,b', [
    (7, Cell(7, 3), Cell(6, 4)),
    (7, Cell(1, 1), Cell(5, 5)),
    (9, Cell(1, 1), Cell(9, 9)),
    (9, Cell(9, 1), Cell(1, 9)),
    (9, Cell(5, 1), Cell(4, 2)),
])
def test_diagonal_pairs_on_larger_odd_grids(constructor, n, a, b):
    walk = constructor.construct_between(ConstructionRequest(GridSpec(n), a, target=b))
    assert_walk(walk, a, n * n - 1, target=b)


def test_request_rejects_same_start_and_target():
    with pytest.raises(PreconditionError):
        ConstructionRequest(GridSpec(4), Cell(1, 1), target=Cell(1, 1))


def test_request_rejects_leaving_the_grid():
    with pytest.raises(PreconditionError):
        ConstructionRequest(GridSpec(4), Cell(1, 1), Direction.N)


def test_request_rejects_diagonal_direction():
    with pytest.raises(PreconditionError):
        ConstructionRequest(GridSpec(4), Cell(2, 2), Direction.NE)


def test_request_rejects_king_grid():
    with pytest.raises(PreconditionError):
        ConstructionRequest(GridSpec(4, MoveSet.KING), Cell(1, 1))


def test_request_bounds():
    with pytest.raises(BoundsError):
        ConstructionRequest(GridSpec(4), Cell(5, 1))


def test_base_side_minimum():
    with pytest.raises(ValueError):
        WalkConstructor(base_side=4)
