"""The tracking loop.

Each time step runs in a fixed order:

1. the target moves along its track,
2. the nodes of the prediction set around its previous position are activated,
3. the target node decides whether to report the current position,
4. the sink moves toward its destination,
5. the run stops if the sink stands on the target's segment.

Before the first step the sink receives the target's start position through
one counted transfer.
"""
import csv
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, TextIO

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .debug import debug_print, is_debug_enabled
from .errors import NonTerminationError, TrackExhaustedError
from .kinematics import Coord, GridSpec, KinematicModel, hop_count, manhattan, sink_step
from .policies import DecisionContext, Policy, prediction_set, should_transfer
from .target_motion import Track, iter_walk

DEFAULT_SINK_START = Coord(5, 5)
DEFAULT_TARGET_START = Coord(100, 100)

TRACE_HEADER = [
    "step", "target_x", "target_y", "sink_x", "sink_y", "dest_x", "dest_y",
    "transferred", "hops", "activated",
]


class SimConfig(BaseModel):
    """One simulation run.

    The target follows ``track`` when given, else the random walk seeded by ``seed``.
    """

    model_config = ConfigDict(frozen=True)

    grid: GridSpec = GridSpec()
    sink_start: Coord = DEFAULT_SINK_START
    target_start: Coord = DEFAULT_TARGET_START
    sink_model: KinematicModel = KinematicModel(v_max=2)
    target_model: KinematicModel = KinematicModel(v_max=1)
    policy: Policy = Policy.always()
    max_steps: int = Field(10_000, ge=1)
    track: Optional[Track] = None
    seed: int = 0
    allow_stay: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "SimConfig":
        for name in ("sink_start", "target_start"):
            pos = getattr(self, name)
            if not self.grid.contains(pos):
                raise ValueError(f"{name} {tuple(pos)} is outside the {self.grid} grid")
        if self.track is not None:
            if self.track.start != self.target_start:
                raise ValueError(
                    f"track starts at {tuple(self.track.start)}, "
                    f"not at target_start {tuple(self.target_start)}"
                )
            self.track.check(self.target_model.v_max, self.grid)
        return self

    @property
    def seed_of_record(self) -> Optional[int]:
        return self.track.seed if self.track is not None else self.seed

    def target_positions(self) -> Iterator[Coord]:
        if self.track is not None:
            return iter(self.track.positions)
        return iter_walk(
            self.target_start, self.target_model.v_max, self.grid, self.seed, self.allow_stay
        )


class StepTrace(NamedTuple):
    """State at the end of one time step; ``sink_pos`` is the position after moving."""

    step: int
    target_pos: Coord
    sink_pos: Coord
    dest: Coord
    transferred: bool
    hops: int
    activated: int

    def to_row(self) -> list:
        return [
            self.step,
            self.target_pos.x, self.target_pos.y,
            self.sink_pos.x, self.sink_pos.y,
            self.dest.x, self.dest.y,
            int(self.transferred), self.hops, self.activated,
        ]


class RunRecord(BaseModel):
    """Outcome of one run. ``time_to_catch`` is None when the target was not caught."""

    model_config = ConfigDict(frozen=True)

    policy: Policy
    track_id: int = 0
    seed: Optional[int] = None
    time_to_catch: Optional[int] = None
    total_hops: int = 0
    transfer_count: int = 0
    total_activations: int = 0

    @property
    def caught(self) -> bool:
        return self.time_to_catch is not None

    @property
    def threshold(self) -> Optional[float]:
        return self.policy.threshold


def catch_check(sink: Coord, target: Coord) -> bool:
    return sink == target


def simulate(
    config: SimConfig,
    track_id: int = 0,
    on_step: Optional[Callable[[StepTrace], None]] = None,
) -> RunRecord:
    """Run the tracking loop until the sink catches the target.

    Args:
        config: Scenario, policy and target trajectory
        track_id: Identifier copied into the record
        on_step: Optional callback receiving a ``StepTrace`` for step 0 and every step after

    Returns:
        RunRecord: Time to catch and accumulated communication metrics

    Raises:
        NonTerminationError: if the target is still free after ``config.max_steps`` steps
        TrackExhaustedError: if a finite track ends before the catch
    """
    grid, policy = config.grid, config.policy
    sink_model, target_model = config.sink_model, config.target_model
    positions = config.target_positions()

    target = next(positions)
    sink = Coord(*config.sink_start)
    dest = target
    total_hops = hop_count(target, sink)
    transfers = 1
    activations = 0

    def record(time_to_catch: Optional[int]) -> RunRecord:
        return RunRecord(
            policy=policy,
            track_id=track_id,
            seed=config.seed_of_record,
            time_to_catch=time_to_catch,
            total_hops=total_hops,
            transfer_count=transfers,
            total_activations=activations,
        )

    if on_step:
        on_step(StepTrace(0, target, sink, dest, True, total_hops, 0))
    if catch_check(sink, target):
        return record(0)

    previous = target
    for step in range(1, config.max_steps + 1):
        try:
            target = next(positions)
        except StopIteration:
            raise TrackExhaustedError(
                f"track {track_id} ended after {step - 1} steps without a catch", record(None)
            ) from None
        assert manhattan(previous, target) <= target_model.v_max, f"target jumped at step {step}"

        predicted = prediction_set(previous, target_model, grid)
        activations += len(predicted)
        assert target in predicted, f"target left the prediction set at step {step}"

        ctx = DecisionContext(
            target_pos=target,
            dest=dest,
            sink_pos=sink,
            sink_model=sink_model,
            target_model=target_model,
            grid=grid,
        )
        transferred = should_transfer(policy, ctx)
        step_hops = 0
        if transferred:
            dest = target
            step_hops = hop_count(target, sink)
            total_hops += step_hops
            transfers += 1

        moved = sink_step(sink, dest, sink_model, grid)
        assert manhattan(sink, moved) <= sink_model.v_max, f"sink overran v_max at step {step}"
        sink = moved

        if is_debug_enabled('engine'):
            debug_print(
                'engine',
                f"t={step} target={tuple(target)} sink={tuple(sink)} dest={tuple(dest)} "
                f"transfer={transferred} hops={step_hops}",
            )
        if on_step:
            on_step(StepTrace(step, target, sink, dest, transferred, step_hops, len(predicted)))
        if catch_check(sink, target):
            return record(step)
        previous = target

    raise NonTerminationError(
        f"{policy} on track {track_id}: target not caught within {config.max_steps} steps",
        record(None),
    )


def write_trace_csv(traces: Iterable[StepTrace], stream: TextIO) -> None:
    """Write step traces with the trace CSV header."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for trace in traces:
        writer.writerow(trace.to_row())
