"""Grid geometry, movement rules and travel-time metrics.

Orientation: x grows East, y grows North. Segments are addressed by 0-based
integer coordinates and every agent moves on the same rectangular grid.
"""
from enum import Enum
from typing import FrozenSet, Iterator, NamedTuple, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

IntOrArray = TypeVar("IntOrArray", int, np.ndarray)


class Coord(NamedTuple):
    """Integer segment coordinates."""

    x: int
    y: int

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


class GridSpec(BaseModel):
    """Extent of the monitored area in segments."""

    model_config = ConfigDict(frozen=True)

    width: int = Field(200, ge=1)
    height: int = Field(200, ge=1)

    def contains(self, pos: Tuple[int, int]) -> bool:
        return 0 <= pos[0] < self.width and 0 <= pos[1] < self.height

    def cells(self) -> Iterator[Coord]:
        for x in range(self.width):
            for y in range(self.height):
                yield Coord(x, y)

    @property
    def size(self) -> int:
        return self.width * self.height

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


class Direction(Enum):
    """Movement directions in tie-breaking order."""

    NORTH = "N"
    EAST = "E"
    SOUTH = "S"
    WEST = "W"
    STAY = "-"

    @property
    def delta(self) -> Tuple[int, int]:
        return _DELTAS[self]

    @property
    def rank(self) -> int:
        return _RANKS[self]


_DELTAS = {
    Direction.NORTH: (0, 1),
    Direction.EAST: (1, 0),
    Direction.SOUTH: (0, -1),
    Direction.WEST: (-1, 0),
    Direction.STAY: (0, 0),
}
_RANKS = {d: i for i, d in enumerate(Direction)}

CARDINALS = (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST)


class MovementMode(str, Enum):
    """How a per-step velocity budget may be spent."""

    AXIS_ONLY = "axis"
    MANHATTAN_BALL = "ball"


class KinematicModel(BaseModel):
    """Maximum velocity (segments per step) and movement mode of an agent."""

    model_config = ConfigDict(frozen=True)

    v_max: int = Field(1, ge=1)
    mode: MovementMode = MovementMode.AXIS_ONLY


def axis_rays(pos: Coord, radius: int, grid: GridSpec) -> FrozenSet[Coord]:
    """Segments reachable by moving ``0..radius`` segments along a single cardinal axis."""
    cells = {Coord(*pos)}
    for direction in CARDINALS:
        dx, dy = direction.delta
        for k in range(1, radius + 1):
            cell = Coord(pos[0] + k * dx, pos[1] + k * dy)
            if not grid.contains(cell):
                break
            cells.add(cell)
    return frozenset(cells)


def manhattan_ball(pos: Coord, radius: int, grid: GridSpec) -> FrozenSet[Coord]:
    """In-grid segments within Manhattan distance ``radius`` of ``pos``."""
    x0, y0 = pos
    cells = set()
    for x in range(max(0, x0 - radius), min(grid.width - 1, x0 + radius) + 1):
        rest = radius - abs(x - x0)
        for y in range(max(0, y0 - rest), min(grid.height - 1, y0 + rest) + 1):
            cells.add(Coord(x, y))
    return frozenset(cells)


def reachable_segments(pos: Coord, model: KinematicModel, grid: GridSpec) -> FrozenSet[Coord]:
    """Segments an agent at ``pos`` can occupy after one time step.

    Args:
        pos: Current position (in-grid)
        model: Velocity and movement mode of the agent
        grid: Monitored area; moves leaving it are clipped away

    Returns:
        FrozenSet[Coord]: Reachable segments, always including ``pos``
    """
    if model.mode is MovementMode.AXIS_ONLY:
        return axis_rays(pos, model.v_max, grid)
    return manhattan_ball(pos, model.v_max, grid)


def step_direction(dx: int, dy: int) -> Direction:
    """Cardinal direction of a displacement, by its dominant axis.

    Equal components resolve to whichever of the two axis directions comes
    first in ``Direction`` order.
    """
    if dx == 0 and dy == 0:
        return Direction.STAY
    horizontal = Direction.EAST if dx > 0 else Direction.WEST
    vertical = Direction.NORTH if dy > 0 else Direction.SOUTH
    if abs(dx) > abs(dy):
        return horizontal
    if abs(dy) > abs(dx):
        return vertical
    return min(horizontal, vertical, key=lambda d: d.rank)


def sink_step(pos: Coord, dest: Coord, model: KinematicModel, grid: GridSpec) -> Coord:
    """Move the sink one step toward ``dest``.

    The reachable segment with the smallest Euclidean distance to ``dest``
    wins. Ties go to the step direction earliest in ``Direction`` order, then
    to the shorter step, then to the lexicographically smaller coordinate.

    Args:
        pos: Current sink position
        dest: Navigation goal (last reported target position)
        model: Sink kinematics
        grid: Monitored area

    Returns:
        Coord: The sink's next position
    """
    if pos == dest:
        return Coord(*pos)

    def rank(cell: Coord) -> Tuple[int, int, int, int, int]:
        dx, dy = cell.x - pos[0], cell.y - pos[1]
        dist_sq = (cell.x - dest[0]) ** 2 + (cell.y - dest[1]) ** 2
        return (dist_sq, step_direction(dx, dy).rank, abs(dx) + abs(dy), cell.x, cell.y)

    return min(reachable_segments(pos, model, grid), key=rank)


def dir_toward(pos: Coord, dest: Coord, model: KinematicModel, grid: GridSpec) -> Direction:
    """Direction the sink at ``pos`` would choose when heading for ``dest``."""
    nxt = sink_step(pos, dest, model, grid)
    return step_direction(nxt.x - pos[0], nxt.y - pos[1])


def _ceil_div(a: IntOrArray, b: int) -> IntOrArray:
    return -(-a // b)


def min_time(origin: Coord, to: Coord, model: KinematicModel) -> int:
    """Minimum number of time steps needed to travel from ``origin`` to ``to``."""
    dx, dy = abs(to[0] - origin[0]), abs(to[1] - origin[1])
    if model.mode is MovementMode.AXIS_ONLY:
        return _ceil_div(dx, model.v_max) + _ceil_div(dy, model.v_max)
    return _ceil_div(dx + dy, model.v_max)


def min_time_grid(origin: Coord, model: KinematicModel, grid: GridSpec) -> np.ndarray:
    """``min_time`` from ``origin`` to every segment, as a ``(width, height)`` array."""
    dx = np.abs(np.arange(grid.width, dtype=np.int64) - origin[0])[:, None]
    dy = np.abs(np.arange(grid.height, dtype=np.int64) - origin[1])[None, :]
    if model.mode is MovementMode.AXIS_ONLY:
        return _ceil_div(dx, model.v_max) + _ceil_div(dy, model.v_max)
    return _ceil_div(dx + dy, model.v_max)


def hop_count(a: Coord, b: Coord) -> int:
    """Shortest-path radio hops between two nodes on the 8-neighbour grid."""
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def manhattan(a: Coord, b: Coord) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])
