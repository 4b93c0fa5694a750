"""Data-transfer conditions deciding when the target node reports to the sink.

Four policies are available:

* ``always``    - report at every time step (prediction-based tracking)
* ``beacon``    - report when the sink reaches the last reported position
* ``dirchange`` - report when the fresh position would change the sink's direction
* ``probgain``  - report when the fresh position raises the probability of
  moving in the right direction by more than a threshold

The probability machinery works on the catch area: the segments the target
can reach no later than the sink. It is split into the segments closer to the
sink's next cell if it heads for the current target position and those closer
to its next cell if it keeps heading for the old destination.
"""
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .debug import debug_print, is_debug_enabled
from .kinematics import (
    Coord,
    GridSpec,
    KinematicModel,
    dir_toward,
    manhattan_ball,
    min_time_grid,
    sink_step,
)

THRESHOLD_RESOLUTION = 10**6


class PolicyKind(str, Enum):
    ALWAYS_SEND = "always"
    BEACON = "beacon"
    DIRECTION_CHANGE = "dirchange"
    PROBABILITY_GAIN = "probgain"

    @property
    def rank(self) -> int:
        return list(PolicyKind).index(self)


class Policy(BaseModel):
    """A transfer condition, with its threshold for ``probgain``."""

    model_config = ConfigDict(frozen=True)

    kind: PolicyKind
    threshold: Optional[float] = Field(None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _threshold_iff_probgain(self) -> "Policy":
        if self.kind is PolicyKind.PROBABILITY_GAIN and self.threshold is None:
            raise ValueError("probgain policy requires a threshold")
        if self.kind is not PolicyKind.PROBABILITY_GAIN and self.threshold is not None:
            raise ValueError(f"{self.kind.value} policy takes no threshold")
        return self

    @classmethod
    def always(cls) -> "Policy":
        return cls(kind=PolicyKind.ALWAYS_SEND)

    @classmethod
    def beacon(cls) -> "Policy":
        return cls(kind=PolicyKind.BEACON)

    @classmethod
    def direction_change(cls) -> "Policy":
        return cls(kind=PolicyKind.DIRECTION_CHANGE)

    @classmethod
    def probability_gain(cls, threshold: float) -> "Policy":
        return cls(kind=PolicyKind.PROBABILITY_GAIN, threshold=threshold)

    def sort_key(self) -> Tuple[int, float]:
        return (self.kind.rank, -1.0 if self.threshold is None else self.threshold)

    def __str__(self) -> str:
        if self.threshold is None:
            return self.kind.value
        return f"{self.kind.value}({self.threshold:g})"


class DecisionContext(BaseModel):
    """What the target node knows when deciding whether to transfer."""

    model_config = ConfigDict(frozen=True)

    target_pos: Coord
    dest: Coord
    sink_pos: Coord
    sink_model: KinematicModel
    target_model: KinematicModel
    grid: GridSpec

    @model_validator(mode="after")
    def _in_grid(self) -> "DecisionContext":
        for name in ("target_pos", "dest", "sink_pos"):
            pos = getattr(self, name)
            if not self.grid.contains(pos):
                raise ValueError(f"{name} {tuple(pos)} is outside the {self.grid} grid")
        return self


class AreaPartition(BaseModel):
    """The catch area and its split by the sink's two candidate next cells."""

    model_config = ConfigDict(frozen=True)

    area: FrozenSet[Coord]
    toward_current: FrozenSet[Coord]
    toward_dest: FrozenSet[Coord]
    next_if_current: Coord
    next_if_dest: Coord


class DirectionCounts(NamedTuple):
    """Cardinalities of the catch area and its two subsets."""

    area: int
    toward_current: int
    toward_dest: int

    def probabilities(self) -> Tuple[float, float]:
        """Probabilities that heading for the current / old position is the right move."""
        return self.toward_current / self.area, self.toward_dest / self.area

    def gain(self) -> Fraction:
        return Fraction(self.toward_current - self.toward_dest, self.area)

    def gain_exceeds(self, threshold: float) -> bool:
        """Exact ``p_current - p_dest > threshold``, compared on the counts."""
        limit = Fraction(threshold).limit_denominator(THRESHOLD_RESOLUTION)
        return self.toward_current - self.toward_dest > limit * self.area


def _area_mask(ctx: DecisionContext) -> np.ndarray:
    t_target = min_time_grid(ctx.target_pos, ctx.target_model, ctx.grid)
    t_sink = min_time_grid(ctx.sink_pos, ctx.sink_model, ctx.grid)
    return t_target <= t_sink


def _closer_masks(
    area: np.ndarray, a: Coord, b: Coord, grid: GridSpec
) -> Tuple[np.ndarray, np.ndarray]:
    xs = np.arange(grid.width, dtype=np.int64)[:, None]
    ys = np.arange(grid.height, dtype=np.int64)[None, :]
    dist_a = (xs - a.x) ** 2 + (ys - a.y) ** 2
    dist_b = (xs - b.x) ** 2 + (ys - b.y) ** 2
    return area & (dist_a < dist_b), area & (dist_b < dist_a)


def _next_cells(ctx: DecisionContext) -> Tuple[Coord, Coord]:
    next_if_current = sink_step(ctx.sink_pos, ctx.target_pos, ctx.sink_model, ctx.grid)
    next_if_dest = sink_step(ctx.sink_pos, ctx.dest, ctx.sink_model, ctx.grid)
    return next_if_current, next_if_dest


def _cells(mask: np.ndarray) -> FrozenSet[Coord]:
    return frozenset(Coord(int(x), int(y)) for x, y in np.argwhere(mask))


def catch_area(ctx: DecisionContext) -> FrozenSet[Coord]:
    """Segments the target reaches no later than the sink (ties included)."""
    return _cells(_area_mask(ctx))


def partition_area(ctx: DecisionContext) -> AreaPartition:
    """Split the catch area by strict Euclidean proximity to the two next cells.

    Segments equidistant from both next cells belong to neither subset.
    """
    area = _area_mask(ctx)
    next_if_current, next_if_dest = _next_cells(ctx)
    toward_current, toward_dest = _closer_masks(area, next_if_current, next_if_dest, ctx.grid)
    return AreaPartition(
        area=_cells(area),
        toward_current=_cells(toward_current),
        toward_dest=_cells(toward_dest),
        next_if_current=next_if_current,
        next_if_dest=next_if_dest,
    )


def direction_counts(ctx: DecisionContext) -> DirectionCounts:
    """``|A|``, ``|A_C|`` and ``|A_D|`` without materialising the sets."""
    area = _area_mask(ctx)
    next_if_current, next_if_dest = _next_cells(ctx)
    if next_if_current == next_if_dest:
        return DirectionCounts(int(area.sum()), 0, 0)
    toward_current, toward_dest = _closer_masks(area, next_if_current, next_if_dest, ctx.grid)
    return DirectionCounts(int(area.sum()), int(toward_current.sum()), int(toward_dest.sum()))


def direction_probabilities(ctx: DecisionContext) -> Tuple[float, float]:
    """``(p_current, p_dest)``: shares of the catch area won by each candidate move."""
    return direction_counts(ctx).probabilities()


def prediction_set(
    prev_target: Coord, target_model: KinematicModel, grid: GridSpec
) -> FrozenSet[Coord]:
    """Nodes to activate: every segment the target may occupy one step after ``prev_target``.

    This is the Manhattan ball of radius ``v_max`` regardless of the movement mode.
    """
    return manhattan_ball(prev_target, target_model.v_max, grid)


def should_transfer(policy: Policy, ctx: DecisionContext) -> bool:
    """Evaluate the transfer condition of ``policy`` in ``ctx``."""
    kind = policy.kind
    if kind is PolicyKind.ALWAYS_SEND:
        return True
    if kind is PolicyKind.BEACON:
        return ctx.sink_pos == ctx.dest
    if kind is PolicyKind.DIRECTION_CHANGE:
        to_dest = dir_toward(ctx.sink_pos, ctx.dest, ctx.sink_model, ctx.grid)
        to_current = dir_toward(ctx.sink_pos, ctx.target_pos, ctx.sink_model, ctx.grid)
        if is_debug_enabled('policy'):
            debug_print('policy', f"dir(dest)={to_dest.value} dir(current)={to_current.value}")
        return to_dest != to_current

    counts = direction_counts(ctx)
    decision = counts.gain_exceeds(policy.threshold)
    if is_debug_enabled('policy'):
        debug_print(
            'policy',
            f"|A|={counts.area} |A_C|={counts.toward_current} |A_D|={counts.toward_dest} "
            f"gain={float(counts.gain()):.3f} threshold={policy.threshold} -> {decision}",
        )
    return decision
