import math

import pytest

from src.constructor import ConstructionRequest, serpentine
from src.exceptions import ChainError, PreconditionError, WalkValidationError
from src.grid_core import Cell, GridSpec, MoveSet, Walk
from src.rectifiable import (
    Chain, Polyline, chain_through, concatenate, path_length, polyline_of_walk,
    step_breakdown, total_variation,
)


@pytest.fixture
def serpentine_2x2():
    return serpentine(GridSpec(2))


def test_polyline_knots_at_cell_centres(serpentine_2x2):
    polyline = polyline_of_walk(serpentine_2x2)
    assert polyline.knots == ((0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5))
    assert polyline.source is serpentine_2x2
    assert polyline.to_list()[0] == [0.5, 0.5]


def test_polyline_rejects_invalid_walk():
    with pytest.raises(WalkValidationError):
        polyline_of_walk(Walk.of(GridSpec(3), [(1, 1), (2, 2)]))


def test_polyline_rejects_repeated_knots():
    with pytest.raises(PreconditionError):
        Polyline(((0.5, 0.5), (0.5, 0.5)))
    with pytest.raises(PreconditionError):
        Polyline(())


@pytest.mark.parametrize('n', range(2, 9))
def test_serpentine_length(n):
    assert path_length(polyline_of_walk(serpentine(GridSpec(n)))) == pytest.approx(n * n - 1)


def test_single_knot_has_zero_length():
    assert path_length(polyline_of_walk(Walk.of(GridSpec(3), [(2, 2)]))) == 0.0


def test_king_length_counts_diagonals():
    walk = Walk.of(GridSpec(3, MoveSet.KING), [(1, 1), (2, 2), (2, 3), (3, 2)])
    assert step_breakdown(walk) == (1, 2)
    assert path_length(polyline_of_walk(walk)) == pytest.approx(1 + 2 * math.sqrt(2), abs=1e-12)


def test_variation_of_rook_walk_within_bound(constructor):
    walk = constructor.construct_from(ConstructionRequest(GridSpec(4), Cell(2, 3)))
    report = total_variation(polyline_of_walk(walk))
    assert report.variation == pytest.approx(15)
    assert report.bound == 16
    assert report.within_bound
    assert report.to_dict() == {'variation': report.variation, 'bound': 16, 'within_bound': True}


@pytest.mark.parametrize('n', [4, 6])
def test_constructed_walks_stay_below_variation_bound(constructor, n):
    grid = GridSpec(n)
    for start in grid.cells():
        walk = constructor.construct_from(ConstructionRequest(grid, start))
        report = total_variation(polyline_of_walk(walk))
        assert report.bound == n * n
        assert report.variation < n * n
        assert report.within_bound


def test_variation_of_king_walk_can_exceed_bound():
    walk = Walk.of(GridSpec(3, MoveSet.KING),
                   [(1, 1), (2, 2), (1, 3), (2, 3), (3, 3), (3, 2), (3, 1), (2, 1), (1, 2)])
    report = total_variation(polyline_of_walk(walk))
    assert report.variation == pytest.approx(5 + 3 * math.sqrt(2))
    assert report.variation <= 8 * math.sqrt(2)
    assert report.bound == 9
    assert not report.within_bound


def test_variation_needs_side_without_source():
    polyline = Polyline(((0.5, 0.5), (1.5, 0.5)))
    with pytest.raises(PreconditionError):
        total_variation(polyline)
    assert total_variation(polyline, side=2).variation == pytest.approx(1.0)


def test_chain_of_serpentine_and_its_reverse(serpentine_2x2):
    chain = Chain((serpentine_2x2, serpentine_2x2.reversed()))
    result = concatenate(chain)
    assert len(result.polyline) == 7
    assert path_length(result.polyline) == pytest.approx(6)
    assert result.visit_counts == {Cell(1, 1): 2, Cell(1, 2): 2, Cell(2, 2): 2, Cell(2, 1): 1}
    assert sum(result.visit_counts.values()) == 7
    assert chain.is_closed


def test_chain_result_to_dict(serpentine_2x2):
    data = concatenate(Chain((serpentine_2x2,))).to_dict()
    assert list(data) == ['knots', 'length', 'visit_counts']
    assert data['visit_counts'][0] == {'cell': [1, 1], 'count': 1}
    assert data['length'] == pytest.approx(3)


def test_single_segment_chain_is_not_closed(serpentine_2x2):
    assert not Chain((serpentine_2x2,)).is_closed


def test_chain_rejects_gap():
    grid = GridSpec(3)
    first = Walk.of(grid, [(1, 1), (1, 2)])
    second = Walk.of(grid, [(2, 2), (2, 3)])
    with pytest.raises(ChainError) as excinfo:
        Chain((first, second))
    assert excinfo.value.segment_index == 1


def test_chain_rejects_mixed_grids():
    first = Walk.of(GridSpec(3), [(1, 1), (1, 2)])
    second = Walk.of(GridSpec(4), [(1, 2), (1, 3)])
    with pytest.raises(ChainError):
        Chain((first, second))
    with pytest.raises(ChainError):
        Chain(())


def test_chain_through_waypoints(constructor):
    grid = GridSpec(4)
    waypoints = [Cell(1, 2), Cell(2, 2), Cell(2, 3)]
    chain = chain_through(grid, waypoints, constructor)
    assert len(chain.segments) == 2
    assert [s.start for s in chain.segments] == waypoints[:2]
    assert chain.segments[-1].end == Cell(2, 3)
    assert all(s.steps == 15 for s in chain.segments)
    counts = concatenate(chain).visit_counts
    assert sum(counts.values()) == 2 * 16 - 1


def test_closed_chain_through(constructor):
    chain = chain_through(GridSpec(4), [Cell(2, 2), Cell(2, 3)], constructor, closed=True)
    assert chain.is_closed
    assert chain.segments[1].end == Cell(2, 2)


def test_chain_through_infeasible_segment(constructor):
    with pytest.raises(ChainError) as excinfo:
        chain_through(GridSpec(4), [Cell(1, 2), Cell(2, 2), Cell(2, 4)], constructor)
    assert excinfo.value.segment_index == 1


def test_chain_through_preconditions():
    with pytest.raises(PreconditionError):
        chain_through(GridSpec(4), [Cell(1, 1)])
    with pytest.raises(PreconditionError):
        chain_through(GridSpec(4, MoveSet.KING), [Cell(1, 1), Cell(1, 2)])
