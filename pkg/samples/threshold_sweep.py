# Sweep the probgain threshold on 10 shared tracks and show where time to catch starts to grow
# Results are also written to sweep/runs.csv and sweep/summary.csv

from pathlib import Path

from sinkchase import ExperimentSpec, PolicyKind, run_experiment

if __name__ == "__main__":
    spec = ExperimentSpec(
        algorithms=(PolicyKind.ALWAYS_SEND, PolicyKind.PROBABILITY_GAIN),
        track_count=10,
        out_dir=Path("sweep"),
    )
    result = run_experiment(spec, jobs=4)
    for row in result.summary:
        print(f"{str(row.policy):15} time {row.mean_time_to_catch:7.1f} "
              f"hops {row.mean_total_hops:8.1f} ({row.hop_reduction_vs_baseline_pct:+.0f}%)")
