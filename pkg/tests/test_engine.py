import io

import pytest
from pydantic import ValidationError

from sinkchase.engine import (
    TRACE_HEADER,
    SimConfig,
    catch_check,
    simulate,
    write_trace_csv,
)
from sinkchase.errors import NonTerminationError, TrackExhaustedError
from sinkchase.kinematics import Coord, GridSpec, KinematicModel, hop_count, manhattan
from sinkchase.policies import Policy, PolicyKind
from sinkchase.target_motion import Track, generate_track

SMALL_GRID = GridSpec(width=30, height=30)

ALL_POLICIES = [
    Policy.always(),
    Policy.beacon(),
    Policy.direction_change(),
    Policy.probability_gain(0.2),
]


def small_config(policy=Policy.always(), seed=0, **kwargs):
    return SimConfig(
        grid=SMALL_GRID,
        sink_start=Coord(2, 2),
        target_start=Coord(15, 15),
        policy=policy,
        seed=seed,
        max_steps=5000,
        **kwargs,
    )


def run_with_trace(config):
    traces = []
    record = simulate(config, on_step=traces.append)
    return record, traces


def test_catch_check():
    assert catch_check(Coord(5, 5), Coord(5, 5))
    assert not catch_check(Coord(5, 5), Coord(5, 6))


def test_default_config_matches_the_reference_scenario():
    config = SimConfig()
    assert config.grid == GridSpec(width=200, height=200)
    assert config.sink_start == (5, 5)
    assert config.target_start == (100, 100)
    assert config.sink_model.v_max == 2
    assert config.target_model.v_max == 1
    assert config.max_steps == 10_000


def test_colocated_start_is_caught_immediately():
    config = SimConfig(sink_start=Coord(100, 100), target_start=Coord(100, 100))
    record = simulate(config)
    assert record.time_to_catch == 0
    assert record.total_hops == 0
    assert record.transfer_count == 1
    assert record.total_activations == 0


def test_stationary_target():
    grid = GridSpec(width=20, height=10)
    track = Track(positions=(Coord(10, 5),) * 20)
    config = SimConfig(
        grid=grid,
        sink_start=Coord(0, 5),
        target_start=Coord(10, 5),
        track=track,
        policy=Policy.always(),
    )
    record, traces = run_with_trace(config)

    assert record.time_to_catch == 5
    assert record.transfer_count == 6
    assert [t.hops for t in traces] == [10, 10, 8, 6, 4, 2]
    assert record.total_hops == 40
    assert [t.sink_pos.x for t in traces] == [0, 2, 4, 6, 8, 10]
    assert record.total_activations == 5 * 5
    assert traces[-1].sink_pos == traces[-1].target_pos


def test_always_send_transfers_every_step():
    for seed in range(10):
        record = simulate(small_config(seed=seed))
        assert record.transfer_count == record.time_to_catch + 1


@pytest.mark.parametrize("policy", ALL_POLICIES, ids=str)
def test_trace_invariants(policy):
    config = small_config(policy=policy, seed=4)
    record, traces = run_with_trace(config)

    assert traces[0].step == 0 and traces[0].transferred
    assert len(traces) == record.time_to_catch + 1
    assert record.total_hops == sum(t.hops for t in traces)
    assert record.transfer_count == sum(t.transferred for t in traces)
    assert record.total_activations == sum(t.activated for t in traces)

    seen_targets = set()
    for previous, current in zip(traces, traces[1:]):
        seen_targets.add(previous.target_pos)
        seen_targets.add(current.target_pos)
        assert manhattan(previous.sink_pos, current.sink_pos) <= config.sink_model.v_max
        assert manhattan(previous.target_pos, current.target_pos) <= config.target_model.v_max
        assert current.dest in seen_targets
        if current.transferred:
            assert current.dest == current.target_pos
            assert current.hops == hop_count(current.target_pos, previous.sink_pos)
        else:
            assert current.hops == 0
            assert current.dest == previous.dest


def test_beacon_refreshes_when_sink_reaches_the_beacon():
    for seed in range(5):
        record, traces = run_with_trace(small_config(policy=Policy.beacon(), seed=seed))
        assert record.caught
        for trace in traces[1:]:
            previous = traces[trace.step - 1]
            assert trace.transferred == (previous.sink_pos == previous.dest)


def test_seeded_walk_and_materialised_track_agree():
    config = small_config(policy=Policy.direction_change(), seed=12)
    track = generate_track(Coord(15, 15), 5001, 1, SMALL_GRID, seed=12)
    from_seed = run_with_trace(config)
    from_track = run_with_trace(config.model_copy(update={"track": track}))
    assert from_seed == from_track


def test_trace_is_deterministic():
    outputs = []
    for _ in range(2):
        _, traces = run_with_trace(small_config(policy=Policy.probability_gain(0.3), seed=21))
        stream = io.StringIO()
        write_trace_csv(traces, stream)
        outputs.append(stream.getvalue())
    assert outputs[0] == outputs[1]
    assert outputs[0].splitlines()[0] == ",".join(TRACE_HEADER)
    assert outputs[0].splitlines()[1] == "0,15,15,2,2,15,15,1,13,0"


def test_non_termination_is_reported():
    config = small_config().model_copy(update={"max_steps": 3})
    with pytest.raises(NonTerminationError) as excinfo:
        simulate(config, track_id=7)
    record = excinfo.value.record
    assert not record.caught
    assert record.time_to_catch is None
    assert record.track_id == 7
    assert record.transfer_count == 4


def test_exhausted_track_is_reported():
    track = generate_track(Coord(15, 15), 4, 1, SMALL_GRID, seed=0)
    with pytest.raises(TrackExhaustedError) as excinfo:
        simulate(small_config(track=track))
    assert excinfo.value.record.transfer_count == 4


def test_config_validation():
    with pytest.raises(ValidationError):
        SimConfig(sink_start=Coord(250, 5))
    with pytest.raises(ValidationError, match="track starts"):
        SimConfig(track=Track(positions=((1, 1),)))
    with pytest.raises(ValidationError, match="exceeds v_max"):
        SimConfig(
            target_start=Coord(1, 1),
            track=Track(positions=((1, 1), (3, 1))),
        )
    with pytest.raises(ValidationError):
        SimConfig(policy=Policy(kind=PolicyKind.PROBABILITY_GAIN))


def test_faster_sink_always_catches_on_the_default_scenario():
    for seed in range(100):
        record = simulate(SimConfig(seed=seed))
        assert record.caught
        assert record.time_to_catch < 10_000


def test_sink_model_in_ball_mode():
    config = small_config(sink_model=KinematicModel(v_max=2, mode="ball"), seed=3)
    record, traces = run_with_trace(config)
    assert record.caught
    assert all(
        manhattan(a.sink_pos, b.sink_pos) <= 2 for a, b in zip(traces, traces[1:])
    )
