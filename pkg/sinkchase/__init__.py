from .engine import RunRecord, SimConfig, StepTrace, catch_check, simulate
from .harness import ExperimentSpec, SummaryRow, run_experiment, summarize
from .kinematics import Coord, Direction, GridSpec, KinematicModel, MovementMode
from .policies import DecisionContext, Policy, PolicyKind, should_transfer
from .target_motion import Track, generate_track, load_track, save_track

__all__ = [
    'Coord', 'DecisionContext', 'Direction', 'ExperimentSpec', 'GridSpec', 'KinematicModel',
    'MovementMode', 'Policy', 'PolicyKind', 'RunRecord', 'SimConfig', 'StepTrace', 'SummaryRow',
    'Track', 'catch_check', 'generate_track', 'load_track', 'run_experiment', 'save_track',
    'should_transfer', 'simulate', 'summarize',
]
