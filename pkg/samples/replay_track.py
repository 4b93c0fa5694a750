# Save a random track to disk, then replay it with direction-change tracking and a step trace

import sys
from pathlib import Path

from sinkchase import Coord, GridSpec, Policy, SimConfig, generate_track, simulate
from sinkchase.engine import write_trace_csv
from sinkchase.target_motion import read_track_file, write_track_file

path = Path("track.txt")
write_track_file(generate_track(Coord(100, 100), 2000, 1, GridSpec(), seed=3), path)

traces = []
config = SimConfig(policy=Policy.direction_change(), track=read_track_file(path))
record = simulate(config, on_step=traces.append)
write_trace_csv(traces, sys.stdout)
print(record, file=sys.stderr)
