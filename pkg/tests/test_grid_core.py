import pytest

from src.exceptions import BoundsError, PreconditionError, WalkValidationError
from src.grid_core import (
    Cell, Direction, GridSpec, MoveSet, Parity, Symmetry, ViolationKind, Walk,
    cell_color, color_counts, is_adjacent, neighbors, ordered_neighbors,
    parity_step_bound, require_valid, symmetry_class, transform_cell, transform_walk,
    validate_walk, vertex_grid,
)


def serpentine_cells(n):
    cells = []
    for row in range(1, n + 1):
        cols = range(1, n + 1) if row % 2 == 1 else range(n, 0, -1)
        cells.extend((row, col) for col in cols)
    return cells


def test_grid_spec_rejects_small_side():
    with pytest.raises(PreconditionError):
        GridSpec(1)


def test_grid_spec_accepts_move_names():
    grid = GridSpec(3, 'king')
    assert grid.moves is MoveSet.KING
    with pytest.raises(PreconditionError):
        GridSpec(3, 'bishop')


def test_cell_color():
    assert cell_color(Cell(1, 1)) is Parity.EVEN
    assert cell_color(Cell(1, 2)) is Parity.ODD
    assert cell_color(Cell(2, 4)) is Parity.EVEN


def test_cell_color_out_of_bounds():
    with pytest.raises(BoundsError):
        cell_color(Cell(6, 1), GridSpec(5))
    with pytest.raises(BoundsError):
        cell_color(Cell(0, 1))


def test_cell_color_upper_bound_needs_grid():
    assert cell_color(Cell(99, 99)) is Parity.EVEN
    with pytest.raises(BoundsError):
        cell_color(Cell(99, 99), GridSpec(8))


def test_color_counts_odd_grid_favours_even():
    assert color_counts(GridSpec(5)) == {Parity.EVEN: 13, Parity.ODD: 12}
    assert color_counts(GridSpec(4)) == {Parity.EVEN: 8, Parity.ODD: 8}


def test_neighbors_counts():
    assert len(neighbors(GridSpec(5, MoveSet.KING), Cell(3, 3))) == 8
    assert neighbors(GridSpec(5), Cell(1, 1)) == {Cell(1, 2), Cell(2, 1)}
    assert len(neighbors(GridSpec(5, MoveSet.KING), Cell(1, 3))) == 5


def test_neighbors_out_of_bounds():
    with pytest.raises(BoundsError):
        neighbors(GridSpec(3), Cell(4, 4))


def test_ordered_neighbors_follow_compass_order():
    king = GridSpec(3, MoveSet.KING)
    assert ordered_neighbors(king, Cell(2, 2)) == [
        Cell(1, 2), Cell(1, 3), Cell(2, 3), Cell(3, 3),
        Cell(3, 2), Cell(3, 1), Cell(2, 1), Cell(1, 1),
    ]
    assert ordered_neighbors(GridSpec(3), Cell(2, 2)) == [Cell(1, 2), Cell(2, 3), Cell(3, 2), Cell(2, 1)]


def test_is_adjacent():
    rook = GridSpec(10)
    assert is_adjacent(rook, Cell(6, 3), Cell(6, 4))
    assert not is_adjacent(GridSpec(4), Cell(2, 2), Cell(2, 4))
    assert is_adjacent(GridSpec(4, MoveSet.KING), Cell(2, 2), Cell(3, 3))
    assert not is_adjacent(GridSpec(4), Cell(2, 2), Cell(3, 3))


def test_direction_parse():
    assert Direction.parse('n') is Direction.N
    assert Direction.parse(' SE ') is Direction.SE
    assert Direction.SE.is_diagonal
    with pytest.raises(PreconditionError):
        Direction.parse('up')


def test_cell_parse():
    assert Cell.parse('2,3') == Cell(2, 3)
    with pytest.raises(PreconditionError):
        Cell.parse('2;3')
    with pytest.raises(PreconditionError):
        Cell.parse('a,b')


def test_validate_serpentine_walk():
    walk = Walk.of(GridSpec(5), serpentine_cells(5))
    report = validate_walk(walk)
    assert report.ok
    assert walk.steps == 24


def test_validate_repeat_violation():
    report = validate_walk(Walk.of(GridSpec(3), [(1, 1), (1, 1)]))
    assert not report.ok
    assert report.violation.index == 1
    assert report.violation.kind is ViolationKind.REPEAT


def test_validate_diagonal_step_on_rook_grid():
    report = validate_walk(Walk.of(GridSpec(3), [(1, 1), (2, 2)]))
    assert report.violation.index == 1
    assert report.violation.kind is ViolationKind.NON_ADJACENT
    assert report.to_dict() == {'ok': False, 'index': 1, 'violation': 'non-adjacent step', 'cell': [2, 2]}


def test_validate_bounds_and_empty():
    assert validate_walk(Walk.of(GridSpec(3), [(1, 1), (1, 4)])).violation.kind is ViolationKind.BOUNDS
    assert validate_walk(Walk(GridSpec(3), ())).violation.kind is ViolationKind.EMPTY


def test_require_valid_raises_with_report():
    with pytest.raises(WalkValidationError) as excinfo:
        require_valid(Walk.of(GridSpec(3), [(1, 1), (1, 1)]))
    assert excinfo.value.report.violation.index == 1


def test_parity_step_bound_examples():
    assert parity_step_bound(GridSpec(4), Cell(2, 2), Cell(2, 4)) == 14
    assert parity_step_bound(GridSpec(4), Cell(1, 1), Cell(1, 2)) == 15
    assert parity_step_bound(GridSpec(3), Cell(1, 2)) == 7


def test_parity_step_bound_odd_grid():
    grid = GridSpec(5)
    assert parity_step_bound(grid, Cell(1, 1)) == 24
    assert parity_step_bound(grid, Cell(1, 1), Cell(5, 5)) == 24
    # Two minority cells: at most 11 minority-colored interior stops.
    assert parity_step_bound(grid, Cell(1, 2), Cell(2, 1)) == 22
    assert parity_step_bound(grid, Cell(1, 1), Cell(1, 2)) == 23


def test_parity_step_bound_king_and_same_cell():
    assert parity_step_bound(GridSpec(3, MoveSet.KING), Cell(1, 2)) == 8
    assert parity_step_bound(GridSpec(3), Cell(2, 2), Cell(2, 2)) == 0


def test_vertex_grid():
    assert vertex_grid(GridSpec(4, MoveSet.KING)) == GridSpec(5, MoveSet.KING)


def test_transform_cell():
    grid = GridSpec(4)
    assert transform_cell(grid, Cell(1, 2), Symmetry.ROTATE_90) == Cell(2, 4)
    assert transform_cell(grid, Cell(1, 2), Symmetry.ROTATE_180) == Cell(4, 3)
    assert transform_cell(grid, Cell(1, 2), Symmetry.TRANSPOSE) == Cell(2, 1)
    assert transform_cell(grid, Cell(1, 2), Symmetry.ANTI_TRANSPOSE) == Cell(3, 4)


@pytest.mark.parametrize('symmetry', list(Symmetry))
def test_transform_walk_keeps_validity(symmetry):
    walk = Walk.of(GridSpec(4), serpentine_cells(4))
    assert validate_walk(transform_walk(walk, symmetry)).ok


def test_symmetry_class_groups_corners():
    grid = GridSpec(3)
    corners = {symmetry_class(grid, Cell(r, c)) for r in (1, 3) for c in (1, 3)}
    assert corners == {Cell(1, 1)}
    assert symmetry_class(grid, Cell(3, 2)) == Cell(1, 2)
    assert symmetry_class(grid, Cell(2, 2)) == Cell(2, 2)
