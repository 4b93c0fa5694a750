"""Target trajectories: seeded random walks and track files.

A track file holds one ``x,y`` line per time step (ASCII, LF terminated, no
header); line 1 is the initial position.
"""
import re
from itertools import islice
from pathlib import Path
from typing import BinaryIO, Iterator, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .debug import debug_print, is_debug_enabled
from .errors import TrackFormatError
from .kinematics import CARDINALS, Coord, GridSpec, manhattan

_LINE_RE = re.compile(r"^(\d+),(\d+)$")


class Track(BaseModel):
    """Target position at each time step; ``positions[0]`` is the start."""

    model_config = ConfigDict(frozen=True)

    positions: Tuple[Coord, ...]
    seed: Optional[int] = None

    @field_validator("positions")
    @classmethod
    def _not_empty(cls, positions: Tuple[Coord, ...]) -> Tuple[Coord, ...]:
        if not positions:
            raise ValueError("track must contain at least one position")
        return positions

    @property
    def start(self) -> Coord:
        return self.positions[0]

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, index: int) -> Coord:
        return self.positions[index]

    def check(self, v_max: int, grid: GridSpec) -> None:
        """Validate the track against a grid and a target velocity.

        Raises:
            TrackFormatError: naming the 1-based line (time step + 1) of the first violation
        """
        previous = None
        for line, pos in enumerate(self.positions, start=1):
            if not grid.contains(pos):
                raise TrackFormatError(f"position {tuple(pos)} is outside the {grid} grid", line)
            if previous is not None and manhattan(previous, pos) > v_max:
                raise TrackFormatError(
                    f"step from {tuple(previous)} to {tuple(pos)} exceeds v_max={v_max}", line
                )
            previous = pos


def random_walk_step(
    pos: Coord,
    v_max: int,
    grid: GridSpec,
    rng: np.random.Generator,
    allow_stay: bool = False,
) -> Coord:
    """Displace ``pos`` by ``v_max`` segments in a uniformly drawn feasible direction.

    Only directions whose result stays in-grid are drawn from, in the fixed
    order North, East, South, West (then Stay when ``allow_stay``). A walker
    with no feasible direction stays where it is.

    Args:
        pos: Current target position
        v_max: Segments moved per step
        grid: Monitored area
        rng: Seeded random source
        allow_stay: Include staying in place among the options

    Returns:
        Coord: The next target position
    """
    options = []
    for direction in CARDINALS:
        dx, dy = direction.delta
        cell = Coord(pos[0] + v_max * dx, pos[1] + v_max * dy)
        if grid.contains(cell):
            options.append(cell)
    if allow_stay:
        options.append(Coord(*pos))
    if not options:
        return Coord(*pos)
    return options[int(rng.integers(len(options)))]


def iter_walk(
    start: Coord,
    v_max: int,
    grid: GridSpec,
    seed: int,
    allow_stay: bool = False,
) -> Iterator[Coord]:
    """Yield an unbounded seeded random walk, starting with ``start``."""
    rng = np.random.default_rng(seed)
    pos = Coord(*start)
    yield pos
    while True:
        pos = random_walk_step(pos, v_max, grid, rng, allow_stay)
        yield pos


def generate_track(
    start: Coord,
    length: int,
    v_max: int,
    grid: GridSpec,
    seed: int,
    allow_stay: bool = False,
) -> Track:
    """Materialise the first ``length`` positions of the walk seeded with ``seed``."""
    if length < 1:
        raise ValueError("track length must be at least 1")
    if not grid.contains(start):
        raise ValueError(f"start {tuple(start)} is outside the {grid} grid")
    positions = tuple(islice(iter_walk(start, v_max, grid, seed, allow_stay), length))
    if is_debug_enabled('track'):
        debug_print('track', f"seed={seed} length={length} end={tuple(positions[-1])}")
    return Track(positions=positions, seed=seed)


def save_track(track: Track, sink: BinaryIO) -> None:
    """Write ``track`` in the track file format."""
    sink.write("".join(f"{x},{y}\n" for x, y in track.positions).encode("ascii"))


def load_track(source: BinaryIO, v_max: int = 1, grid: Optional[GridSpec] = None) -> Track:
    """Read and validate a track file.

    Args:
        source: Byte stream holding the track file
        v_max: Target velocity the steps must respect
        grid: Grid the positions must lie in (200x200 when omitted)

    Returns:
        Track: The parsed track (without a seed of record)

    Raises:
        TrackFormatError: on malformed lines, out-of-grid positions or oversized steps
    """
    grid = grid or GridSpec()
    data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as e:
            raise TrackFormatError(f"track file is not ASCII: {e}") from None

    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise TrackFormatError("track must contain at least one position")

    positions = []
    for line_no, text in enumerate(lines, start=1):
        match = _LINE_RE.match(text)
        if not match:
            raise TrackFormatError(f"expected 'x,y', got {text!r}", line_no)
        positions.append(Coord(int(match.group(1)), int(match.group(2))))

    track = Track(positions=tuple(positions))
    track.check(v_max, grid)
    return track


def write_track_file(track: Track, path: Union[str, Path]) -> None:
    with open(path, "wb") as f:
        save_track(track, f)


def read_track_file(
    path: Union[str, Path], v_max: int = 1, grid: Optional[GridSpec] = None
) -> Track:
    with open(path, "rb") as f:
        return load_track(f, v_max=v_max, grid=grid)
