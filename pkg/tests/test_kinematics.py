import numpy as np
import pytest
from pydantic import ValidationError

from sinkchase.kinematics import (
    Coord,
    Direction,
    GridSpec,
    KinematicModel,
    MovementMode,
    axis_rays,
    dir_toward,
    hop_count,
    manhattan,
    manhattan_ball,
    min_time,
    min_time_grid,
    reachable_segments,
    sink_step,
    step_direction,
)

from .oracles import bfs_distances, movement_graph, neighbour_graph

AXIS = MovementMode.AXIS_ONLY
BALL = MovementMode.MANHATTAN_BALL


def test_grid_spec_validation():
    with pytest.raises(ValidationError):
        GridSpec(width=0, height=5)
    assert GridSpec().width == 200 and GridSpec().height == 200
    assert GridSpec(width=3, height=2).size == 6
    assert len(list(GridSpec(width=3, height=2).cells())) == 6


def test_kinematic_model_requires_positive_velocity():
    with pytest.raises(ValidationError):
        KinematicModel(v_max=0)
    assert KinematicModel(v_max=2).mode is AXIS


def test_zero_radius_sets_hold_only_the_position(grid):
    assert axis_rays(Coord(5, 5), 0, grid) == {(5, 5)}
    assert manhattan_ball(Coord(5, 5), 0, grid) == {(5, 5)}


def test_axis_reachable_segments(grid):
    cells = reachable_segments(Coord(5, 5), KinematicModel(v_max=2, mode=AXIS), grid)
    assert cells == {(5, 5), (4, 5), (6, 5), (3, 5), (7, 5), (5, 4), (5, 6), (5, 3), (5, 7)}


def test_ball_reachable_segments_clipped_at_corner(grid):
    cells = reachable_segments(Coord(0, 0), KinematicModel(v_max=2, mode=BALL), grid)
    assert cells == {(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1)}


def test_axis_reachable_segments_clipped_at_edge(grid):
    cells = reachable_segments(Coord(0, 1), KinematicModel(v_max=2, mode=AXIS), grid)
    assert cells == {(0, 1), (1, 1), (2, 1), (0, 0), (0, 2), (0, 3)}


def test_sink_step_at_destination(grid, sink_model):
    assert sink_step(Coord(3, 3), Coord(3, 3), sink_model, grid) == (3, 3)


def test_sink_step_examples(grid, sink_model):
    assert sink_step(Coord(3, 3), Coord(0, 3), sink_model, grid) == (1, 3)
    assert sink_step(Coord(3, 3), Coord(3, 0), sink_model, grid) == (3, 1)
    ball = KinematicModel(v_max=2, mode=BALL)
    assert sink_step(Coord(0, 0), Coord(10, 10), ball, grid) == (1, 1)


def test_sink_step_stops_on_adjacent_destination(grid, sink_model):
    assert sink_step(Coord(3, 3), Coord(4, 3), sink_model, grid) == (4, 3)


def test_sink_step_ties_prefer_north(grid, sink_model):
    # (5, 7) and (7, 5) are equally close to (100, 100)
    assert sink_step(Coord(5, 5), Coord(100, 100), sink_model, grid) == (5, 7)


def test_sink_step_diagonal_tie_prefers_north_dominant_step(grid):
    # (6, 7) and (7, 6) are equally close; the first is a North step
    ball = KinematicModel(v_max=3, mode=BALL)
    assert sink_step(Coord(5, 5), Coord(25, 25), ball, grid) == (6, 7)
    assert dir_toward(Coord(5, 5), Coord(25, 25), ball, grid) is Direction.NORTH


def test_dir_toward(grid, sink_model):
    assert dir_toward(Coord(3, 3), Coord(3, 3), sink_model, grid) is Direction.STAY
    assert dir_toward(Coord(3, 3), Coord(0, 3), sink_model, grid) is Direction.WEST
    assert dir_toward(Coord(3, 3), Coord(3, 0), sink_model, grid) is Direction.SOUTH
    assert dir_toward(Coord(3, 3), Coord(9, 3), sink_model, grid) is Direction.EAST
    assert dir_toward(Coord(3, 3), Coord(3, 9), sink_model, grid) is Direction.NORTH


def test_step_direction_dominant_axis():
    assert step_direction(0, 0) is Direction.STAY
    assert step_direction(2, 1) is Direction.EAST
    assert step_direction(-1, -2) is Direction.SOUTH
    # equal components: North before East, South before West
    assert step_direction(1, 1) is Direction.NORTH
    assert step_direction(1, -1) is Direction.EAST
    assert step_direction(-1, -1) is Direction.SOUTH
    assert step_direction(-1, 1) is Direction.NORTH


def test_min_time_examples():
    axis = KinematicModel(v_max=2, mode=AXIS)
    ball = KinematicModel(v_max=2, mode=BALL)
    assert min_time(Coord(7, 7), Coord(7, 7), axis) == 0
    assert min_time(Coord(0, 0), Coord(1, 1), axis) == 2
    assert min_time(Coord(0, 0), Coord(1, 1), ball) == 1
    assert min_time(Coord(0, 0), Coord(5, 0), axis) == 3


def test_hop_count_examples():
    assert hop_count(Coord(5, 5), Coord(5, 5)) == 0
    assert hop_count(Coord(0, 0), Coord(3, 1)) == 3
    assert hop_count(Coord(5, 5), Coord(100, 100)) == 95


@pytest.mark.parametrize("mode", [AXIS, BALL])
@pytest.mark.parametrize("v_max", [1, 2, 3])
def test_min_time_matches_bfs_on_all_pairs(v_max, mode):
    size = 20
    model = KinematicModel(v_max=v_max, mode=mode)
    graph = movement_graph(size, size, v_max, mode)
    for source in graph.nodes:
        distances = bfs_distances(graph, source)
        for target, expected in distances.items():
            assert min_time(Coord(*source), Coord(*target), model) == expected
        assert len(distances) == size * size


def test_hop_count_matches_bfs_on_all_pairs():
    size = 20
    graph = neighbour_graph(size, size)
    for source in graph.nodes:
        for target, expected in bfs_distances(graph, source).items():
            assert hop_count(Coord(*source), Coord(*target)) == expected


def test_hop_count_matches_bfs_far_apart():
    graph = neighbour_graph(101, 101)
    assert bfs_distances(graph, (5, 5))[(100, 100)] == hop_count(Coord(5, 5), Coord(100, 100))


@pytest.mark.parametrize("mode", [AXIS, BALL])
def test_min_time_grid_agrees_with_min_time(mode):
    grid = GridSpec(width=13, height=9)
    model = KinematicModel(v_max=3, mode=mode)
    origin = Coord(4, 7)
    times = min_time_grid(origin, model, grid)
    assert times.shape == (13, 9)
    for cell in grid.cells():
        assert times[cell.x, cell.y] == min_time(origin, cell, model)


def random_coord(rng, grid):
    return Coord(int(rng.integers(grid.width)), int(rng.integers(grid.height)))


@pytest.mark.parametrize("mode", [AXIS, BALL])
def test_movement_properties_on_random_cases(mode):
    rng = np.random.default_rng(2024)
    grid = GridSpec(width=25, height=17)
    for _ in range(1000):
        v_max = int(rng.integers(1, 5))
        model = KinematicModel(v_max=v_max, mode=mode)
        pos, dest, other = (random_coord(rng, grid) for _ in range(3))

        reachable = reachable_segments(pos, model, grid)
        assert pos in reachable
        assert all(grid.contains(c) for c in reachable)
        assert reachable <= manhattan_ball(pos, v_max, grid)
        if mode is AXIS:
            assert len(reachable) <= 4 * v_max + 1

        nxt = sink_step(pos, dest, model, grid)
        assert nxt in reachable
        assert manhattan(pos, nxt) <= v_max
        assert nxt == sink_step(pos, dest, model, grid)

        t = min_time(pos, dest, model)
        assert t == min_time(dest, pos, model)
        assert (t == 0) == (pos == dest)
        assert t <= min_time(pos, other, model) + min_time(other, dest, model)


def test_axis_reachable_is_subset_of_ball():
    grid = GridSpec(width=9, height=9)
    for v_max in (1, 2, 3, 4):
        for cell in grid.cells():
            axis = reachable_segments(cell, KinematicModel(v_max=v_max, mode=AXIS), grid)
            ball = reachable_segments(cell, KinematicModel(v_max=v_max, mode=BALL), grid)
            assert axis <= ball
