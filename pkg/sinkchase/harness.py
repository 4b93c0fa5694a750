"""Experiment runner: many tracks, many policies, averaged results.

Every policy of an experiment runs on the same set of seeded tracks (track
``i`` uses seed ``base_seed + i``), so per-track results are comparable
across policies.
"""
import csv
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from rich.console import Console

from .debug import debug_print, is_debug_enabled
from .engine import RunRecord, SimConfig, simulate
from .errors import SimulationError, SummaryError
from .policies import Policy, PolicyKind
from .target_motion import Track, generate_track, write_track_file

RUNS_HEADER = [
    "track_id", "policy", "threshold", "time_to_catch", "total_hops",
    "transfer_count", "total_activations", "seed",
]
SUMMARY_HEADER = [
    "policy", "threshold", "mean_time_to_catch", "mean_total_hops", "mean_transfer_count",
    "hop_reduction_vs_baseline_pct", "time_increase_vs_baseline_pct",
]
NOT_CAUGHT = "NA"

DEFAULT_THRESHOLDS = tuple(round(i / 10, 1) for i in range(10))

console = Console(stderr=True)


class ExperimentSpec(BaseModel):
    """Base scenario plus the policies, thresholds and tracks to sweep."""

    model_config = ConfigDict(frozen=True)

    base: SimConfig = SimConfig()
    algorithms: Tuple[PolicyKind, ...] = tuple(PolicyKind)
    thresholds: Tuple[float, ...] = DEFAULT_THRESHOLDS
    track_count: int = Field(10, ge=1)
    base_seed: int = 0
    out_dir: Optional[Path] = None
    save_tracks: bool = False

    @field_validator("thresholds")
    @classmethod
    def _thresholds_in_range(cls, thresholds: Tuple[float, ...]) -> Tuple[float, ...]:
        for t in thresholds:
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"threshold {t} is outside [0, 1]")
        return thresholds

    @model_validator(mode="after")
    def _has_policies(self) -> "ExperimentSpec":
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        if PolicyKind.PROBABILITY_GAIN in self.algorithms and not self.thresholds:
            raise ValueError("probgain needs at least one threshold")
        return self

    def policies(self) -> List[Policy]:
        """Every policy of the sweep, one per threshold for probgain, in reporting order."""
        policies = []
        for kind in dict.fromkeys(self.algorithms):
            if kind is PolicyKind.PROBABILITY_GAIN:
                policies.extend(Policy.probability_gain(t) for t in dict.fromkeys(self.thresholds))
            else:
                policies.append(Policy(kind=kind))
        return sorted(policies, key=Policy.sort_key)

    def seed_for(self, track_id: int) -> int:
        return self.base_seed + track_id

    def make_track(self, track_id: int) -> Track:
        """Track ``track_id``, long enough for any run that ends within ``max_steps``."""
        base = self.base
        return generate_track(
            base.target_start,
            base.max_steps + 1,
            base.target_model.v_max,
            base.grid,
            self.seed_for(track_id),
            base.allow_stay,
        )


class SummaryRow(BaseModel):
    """Means over the caught runs of one policy."""

    model_config = ConfigDict(frozen=True)

    policy: Policy
    mean_time_to_catch: float
    mean_total_hops: float
    mean_transfer_count: float
    mean_activations: float
    hop_reduction_vs_baseline_pct: Optional[float] = None
    time_increase_vs_baseline_pct: Optional[float] = None
    track_ids: Tuple[int, ...] = ()
    excluded: int = 0


class ExperimentResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: Tuple[RunRecord, ...]
    summary: Tuple[SummaryRow, ...]
    runs_path: Optional[Path] = None
    summary_path: Optional[Path] = None

    @property
    def not_caught(self) -> List[RunRecord]:
        return [r for r in self.records if not r.caught]

    def per_track(self) -> Dict[int, List[RunRecord]]:
        """Records grouped by track, each group in policy order."""
        tracks: Dict[int, List[RunRecord]] = defaultdict(list)
        for record in self.records:
            tracks[record.track_id].append(record)
        return dict(tracks)


def _mean(values: List[int]) -> float:
    return sum(values) / len(values)


def summarize(records: Iterable[RunRecord]) -> List[SummaryRow]:
    """Average caught runs per policy and compare against the always-send baseline.

    Runs that did not catch the target are left out of the means with a warning.

    Args:
        records: Run records of one or more policies

    Returns:
        List[SummaryRow]: One row per policy, in reporting order

    Raises:
        SummaryError: if ``records`` is empty
    """
    groups: Dict[Policy, List[RunRecord]] = defaultdict(list)
    for record in records:
        groups[record.policy].append(record)
    if not groups:
        raise SummaryError("cannot summarize an empty set of run records")

    partial = []
    for policy in sorted(groups, key=Policy.sort_key):
        runs = groups[policy]
        caught = [r for r in runs if r.caught]
        excluded = len(runs) - len(caught)
        if excluded:
            console.print(
                f"[yellow]Warning:[/yellow] {excluded} of {len(runs)} {policy} runs did not "
                f"catch the target and are excluded from the means"
            )
        if not caught:
            continue
        partial.append(
            dict(
                policy=policy,
                mean_time_to_catch=_mean([r.time_to_catch for r in caught]),
                mean_total_hops=_mean([r.total_hops for r in caught]),
                mean_transfer_count=_mean([r.transfer_count for r in caught]),
                mean_activations=_mean([r.total_activations for r in caught]),
                track_ids=tuple(r.track_id for r in caught),
                excluded=excluded,
            )
        )

    baseline = next((p for p in partial if p["policy"].kind is PolicyKind.ALWAYS_SEND), None)
    rows = []
    for values in partial:
        if baseline is not None:
            base_hops = baseline["mean_total_hops"]
            base_time = baseline["mean_time_to_catch"]
            if base_hops:
                values["hop_reduction_vs_baseline_pct"] = (
                    (base_hops - values["mean_total_hops"]) / base_hops * 100
                )
            if base_time:
                values["time_increase_vs_baseline_pct"] = (
                    (values["mean_time_to_catch"] - base_time) / base_time * 100
                )
        rows.append(SummaryRow(**values))
    return rows


def pareto_front(rows: Iterable[SummaryRow]) -> List[SummaryRow]:
    """Rows not dominated in (mean time to catch, mean hop count)."""
    rows = list(rows)

    def dominates(a: SummaryRow, b: SummaryRow) -> bool:
        no_worse = (
            a.mean_time_to_catch <= b.mean_time_to_catch
            and a.mean_total_hops <= b.mean_total_hops
        )
        better = (
            a.mean_time_to_catch < b.mean_time_to_catch or a.mean_total_hops < b.mean_total_hops
        )
        return no_worse and better

    return [r for r in rows if not any(dominates(other, r) for other in rows)]


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def write_runs_csv(records: Iterable[RunRecord], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RUNS_HEADER)
    for r in records:
        writer.writerow([
            r.track_id,
            r.policy.kind.value,
            _fmt(r.threshold),
            NOT_CAUGHT if r.time_to_catch is None else r.time_to_catch,
            r.total_hops,
            r.transfer_count,
            r.total_activations,
            "" if r.seed is None else r.seed,
        ])


def read_runs_csv(stream: TextIO) -> List[RunRecord]:
    """Parse a per-run CSV written by ``write_runs_csv``."""
    records = []
    for row in csv.DictReader(stream):
        threshold = float(row["threshold"]) if row["threshold"] else None
        records.append(RunRecord(
            policy=Policy(kind=PolicyKind(row["policy"]), threshold=threshold),
            track_id=int(row["track_id"]),
            seed=int(row["seed"]) if row["seed"] else None,
            time_to_catch=None if row["time_to_catch"] == NOT_CAUGHT else int(row["time_to_catch"]),
            total_hops=int(row["total_hops"]),
            transfer_count=int(row["transfer_count"]),
            total_activations=int(row["total_activations"]),
        ))
    return records


def write_summary_csv(rows: Iterable[SummaryRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for row in rows:
        writer.writerow([
            row.policy.kind.value,
            _fmt(row.policy.threshold),
            _fmt(row.mean_time_to_catch),
            _fmt(row.mean_total_hops),
            _fmt(row.mean_transfer_count),
            _fmt(row.hop_reduction_vs_baseline_pct),
            _fmt(row.time_increase_vs_baseline_pct),
        ])


def run_one(base: SimConfig, track: Track, track_id: int, policy: Policy) -> RunRecord:
    """Simulate ``policy`` on ``track``; a run that fails to catch yields its partial record."""
    config = base.model_copy(update={"policy": policy, "track": track})
    try:
        record = simulate(config, track_id=track_id)
    except SimulationError as e:
        console.print(f"[yellow]Warning:[/yellow] {e}")
        return e.record
    if is_debug_enabled('harness'):
        debug_print(
            'harness',
            f"track={track_id} {policy}: time_to_catch={record.time_to_catch} "
            f"hops={record.total_hops} transfers={record.transfer_count}",
        )
    return record


def _save_tracks(tracks: Dict[int, Track], records: List[RunRecord], out_dir: Path) -> None:
    track_dir = out_dir / "tracks"
    track_dir.mkdir(parents=True, exist_ok=True)
    for track_id, track in tracks.items():
        runs = [r for r in records if r.track_id == track_id]
        if all(r.caught for r in runs):
            # long enough to replay every run on this track
            length = max(r.time_to_catch for r in runs) + 1
            track = Track(positions=track.positions[:length], seed=track.seed)
        write_track_file(track, track_dir / f"track_{track_id:03d}.txt")


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> ExperimentResult:
    """Run every policy of ``spec`` on every track and summarise.

    Args:
        spec: The experiment to run
        jobs: Worker processes; 1 runs everything in this process

    Returns:
        ExperimentResult: Records sorted by (track, policy), the summary, and the
        paths of the CSV files when ``spec.out_dir`` is set
    """
    tracks = {i: spec.make_track(i) for i in range(spec.track_count)}
    policies = spec.policies()
    tasks = [(track_id, policy) for track_id in tracks for policy in policies]
    if is_debug_enabled('harness'):
        debug_print('harness', f"{len(tracks)} tracks x {len(policies)} policies, jobs={jobs}")

    track_ids = [t for t, _ in tasks]
    task_tracks = [tracks[t] for t in track_ids]
    task_policies = [p for _, p in tasks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(
                pool.map(run_one, repeat(spec.base), task_tracks, track_ids, task_policies)
            )
    else:
        records = list(map(run_one, repeat(spec.base), task_tracks, track_ids, task_policies))

    records.sort(key=lambda r: (r.track_id, r.policy.sort_key()))
    summary = summarize(records)

    runs_path = summary_path = None
    if spec.out_dir is not None:
        spec.out_dir.mkdir(parents=True, exist_ok=True)
        runs_path = spec.out_dir / "runs.csv"
        summary_path = spec.out_dir / "summary.csv"
        with open(runs_path, "w", newline="") as f:
            write_runs_csv(records, f)
        with open(summary_path, "w", newline="") as f:
            write_summary_csv(summary, f)
        if spec.save_tracks:
            _save_tracks(tracks, records, spec.out_dir)

    return ExperimentResult(
        records=tuple(records),
        summary=tuple(summary),
        runs_path=runs_path,
        summary_path=summary_path,
    )
