#!/usr/bin/env python3
import argparse
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .config import Settings, load_settings
from .debug import debug_print, is_debug_enabled
from .engine import (
    DEFAULT_TARGET_START,
    RunRecord,
    SimConfig,
    StepTrace,
    simulate,
    write_trace_csv,
)
from .errors import ConfigError, SimulationError, TrackFormatError
from .harness import (
    NOT_CAUGHT,
    ExperimentResult,
    ExperimentSpec,
    pareto_front,
    run_experiment,
)
from .kinematics import Coord, GridSpec, KinematicModel, MovementMode
from .policies import Policy, PolicyKind
from .target_motion import generate_track, read_track_file, write_track_file
from .version import get_version

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_CAUGHT = 3

console = Console()
err_console = Console(stderr=True)


def parse_grid(text: str) -> GridSpec:
    try:
        width, height = (int(v) for v in text.lower().split("x"))
        return GridSpec(width=width, height=height)
    except (ValueError, ValidationError):
        raise argparse.ArgumentTypeError(f"expected WxH with positive sizes, got {text!r}")


def parse_coord(text: str) -> Coord:
    try:
        x, y = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}")
    return Coord(x, y)


def parse_policies(text: str) -> List[PolicyKind]:
    try:
        return [PolicyKind(p.strip()) for p in text.split(",") if p.strip()]
    except ValueError:
        choices = ", ".join(k.value for k in PolicyKind)
        raise argparse.ArgumentTypeError(f"policies must be among {choices}, got {text!r}")


def parse_thresholds(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sinkchase",
        description="Simulate a mobile sink chasing a target through a wireless sensor network",
    )
    parser.add_argument(
        "-e", "--env",
        help="Environment prefix for variables (e.g., 'LAB' for LAB_SINKCHASE_MAX_STEPS)",
        default=None,
    )
    parser.add_argument(
        "--debug",
        metavar="COMPONENTS",
        help="Comma-separated debug components (engine, policy, track, harness, cli or all)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_version()}")

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--grid", type=parse_grid, default=GridSpec(), help="Grid size WxH")
    scenario.add_argument("--sink-start", type=parse_coord, default=Coord(5, 5))
    scenario.add_argument(
        "--target-start", type=parse_coord, default=None,
        help="Target start x,y (default 100,100, or the first line of --track)",
    )
    scenario.add_argument("--v-sink", type=int, default=2, help="Sink velocity (segments/step)")
    scenario.add_argument("--v-target", type=int, default=1, help="Target velocity (segments/step)")
    scenario.add_argument(
        "--mode",
        choices=[m.value for m in MovementMode],
        default=MovementMode.AXIS_ONLY.value,
        help="Movement mode: single-axis moves or the full Manhattan ball",
    )
    scenario.add_argument("--max-steps", type=int, default=None)
    scenario.add_argument(
        "--target-stay", action="store_true", help="Let the random walk stay in place"
    )

    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser("simulate", parents=[scenario], help="Run a single simulation")
    sim.add_argument(
        "--policy", choices=[k.value for k in PolicyKind], default=PolicyKind.ALWAYS_SEND.value
    )
    sim.add_argument("--threshold", type=float, default=None, help="probgain threshold")
    source = sim.add_mutually_exclusive_group()
    source.add_argument("--seed", type=int, default=None, help="Random walk seed")
    source.add_argument("--track", type=Path, default=None, help="Replay a track file")
    sim.add_argument("--trace", type=Path, default=None, help="Write the step trace CSV here")

    exp = commands.add_parser("experiment", parents=[scenario], help="Run a policy sweep")
    exp.add_argument("--tracks", type=int, default=10, help="Number of random tracks")
    exp.add_argument("--base-seed", type=int, default=None)
    exp.add_argument(
        "--policies", type=parse_policies, default=list(PolicyKind),
        help="Comma-separated policies (always,beacon,dirchange,probgain)",
    )
    exp.add_argument(
        "--thresholds", type=parse_thresholds, default=None,
        help="Comma-separated probgain thresholds (default 0.0..0.9)",
    )
    exp.add_argument("--out-dir", type=Path, default=None)
    exp.add_argument("--jobs", type=int, default=None, help="Worker processes")
    exp.add_argument("--save-tracks", action="store_true", help="Write the tracks used")
    exp.add_argument("--show-tracks", action="store_true", help="Print per-track results")

    tracks = commands.add_parser("tracks", help="Generate random track files")
    tracks.add_argument("--grid", type=parse_grid, default=GridSpec())
    tracks.add_argument("--target-start", type=parse_coord, default=Coord(100, 100))
    tracks.add_argument("--v-target", type=int, default=1)
    tracks.add_argument("--target-stay", action="store_true")
    tracks.add_argument("--tracks", type=int, default=10)
    tracks.add_argument("--base-seed", type=int, default=None)
    tracks.add_argument("--length", type=int, default=1000, help="Positions per track")
    tracks.add_argument("--out-dir", type=Path, default=None)
    return parser


def scenario_config(
    args: argparse.Namespace, settings: Settings, **overrides: Any
) -> SimConfig:
    """Build the run configuration; a replayed track supplies the default target start."""
    mode = MovementMode(args.mode)
    target_start = args.target_start
    if target_start is None:
        track = overrides.get("track")
        target_start = track.start if track is not None else DEFAULT_TARGET_START
    return SimConfig(
        grid=args.grid,
        sink_start=args.sink_start,
        target_start=target_start,
        sink_model=KinematicModel(v_max=args.v_sink, mode=mode),
        target_model=KinematicModel(v_max=args.v_target, mode=mode),
        max_steps=args.max_steps if args.max_steps is not None else settings.max_steps,
        allow_stay=args.target_stay,
        **overrides,
    )


def print_record(record: RunRecord) -> None:
    table = Table(title=f"Run: {record.policy}", show_header=False)
    table.add_column(style="blue")
    table.add_column(style="green")
    table.add_row("Time to catch", str(record.time_to_catch))
    table.add_row("Total hops", str(record.total_hops))
    table.add_row("Transfers", str(record.transfer_count))
    table.add_row("Activations", str(record.total_activations))
    table.add_row("Seed", str(record.seed))
    console.print(table)


def print_summary(result: ExperimentResult) -> None:
    front = {row.policy for row in pareto_front(result.summary)}
    table = Table(title="Average time to catch and hop count")
    headers = ("Policy", "Time to catch", "Hops", "Transfers", "Hop reduction", "Time increase", "")
    for header in headers:
        table.add_column(header, justify="right" if header != "Policy" else "left")

    def pct(value: Optional[float]) -> str:
        return "" if value is None else f"{value:+.1f}%"

    for row in result.summary:
        table.add_row(
            str(row.policy),
            f"{row.mean_time_to_catch:.1f}",
            f"{row.mean_total_hops:.1f}",
            f"{row.mean_transfer_count:.1f}",
            pct(row.hop_reduction_vs_baseline_pct),
            pct(row.time_increase_vs_baseline_pct),
            "[green]pareto[/green]" if row.policy in front else "",
        )
    console.print(table)


def print_per_track(result: ExperimentResult) -> None:
    table = Table(title="Time to catch / hops per track")
    table.add_column("Track", justify="right")
    policies = [row.policy for row in result.summary]
    for policy in policies:
        table.add_column(str(policy), justify="right")
    for track_id, records in result.per_track().items():
        by_policy = {r.policy: r for r in records}
        cells = []
        for policy in policies:
            r = by_policy.get(policy)
            if r is None:
                cells.append("")
            else:
                ttc = r.time_to_catch if r.caught else NOT_CAUGHT
                cells.append(f"{ttc} / {r.total_hops}")
        table.add_row(str(track_id), *cells)
    console.print(table)


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    threshold = args.threshold
    if args.policy == PolicyKind.PROBABILITY_GAIN.value and threshold is None:
        raise ConfigError("--policy probgain requires --threshold")
    policy = Policy(kind=PolicyKind(args.policy), threshold=threshold)

    overrides: Dict[str, Any] = {"policy": policy}
    if args.track is not None:
        overrides["track"] = read_track_file(args.track, v_max=args.v_target, grid=args.grid)
    else:
        overrides["seed"] = args.seed if args.seed is not None else settings.base_seed
    config = scenario_config(args, settings, **overrides)

    traces: List[StepTrace] = []
    try:
        record = simulate(config, on_step=traces.append if args.trace else None)
    except SimulationError as e:
        err_console.print(f"[red]Error:[/red] {escape(str(e))}")
        print_record(e.record)
        return EXIT_NOT_CAUGHT
    finally:
        if args.trace:
            with open(args.trace, "w", newline="") as f:
                write_trace_csv(traces, f)
    print_record(record)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace, settings: Settings) -> int:
    spec_args = dict(
        base=scenario_config(args, settings),
        algorithms=tuple(args.policies),
        track_count=args.tracks,
        base_seed=args.base_seed if args.base_seed is not None else settings.base_seed,
        out_dir=args.out_dir if args.out_dir is not None else settings.out_dir,
        save_tracks=args.save_tracks,
    )
    if args.thresholds is not None:
        spec_args["thresholds"] = tuple(args.thresholds)
    spec = ExperimentSpec(**spec_args)
    jobs = args.jobs if args.jobs is not None else settings.jobs
    if jobs < 1:
        raise ConfigError("--jobs must be at least 1")

    result = run_experiment(spec, jobs=jobs)
    print_summary(result)
    if args.show_tracks:
        print_per_track(result)
    console.print(f"Per-run results: {result.runs_path}")
    console.print(f"Summary: {result.summary_path}")
    if result.not_caught:
        missed = len(result.not_caught)
        err_console.print(f"[red]Error:[/red] {missed} runs did not catch the target")
        return EXIT_NOT_CAUGHT
    return EXIT_OK


def cmd_tracks(args: argparse.Namespace, settings: Settings) -> int:
    out_dir = (args.out_dir if args.out_dir is not None else settings.out_dir) / "tracks"
    base_seed = args.base_seed if args.base_seed is not None else settings.base_seed
    if args.tracks < 1:
        raise ConfigError("--tracks must be at least 1")
    out_dir.mkdir(parents=True, exist_ok=True)
    for track_id in range(args.tracks):
        try:
            track = generate_track(
                args.target_start, args.length, args.v_target, args.grid,
                base_seed + track_id, args.target_stay,
            )
        except ValueError as e:
            raise ConfigError(str(e)) from None
        path = out_dir / f"track_{track_id:03d}.txt"
        write_track_file(track, path)
        console.print(f"Wrote {path} (seed {track.seed})")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
    "tracks": cmd_tracks,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.debug:
        os.environ["DEBUG"] = args.debug

    try:
        settings = load_settings(args.env)
        if is_debug_enabled('cli'):
            debug_print('cli', f"Command: {args.command} {vars(args)}")
        return COMMANDS[args.command](args, settings)
    except (ConfigError, TrackFormatError, ValidationError) as e:
        err_console.print(f"[red]Error:[/red] {escape(str(e))}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
