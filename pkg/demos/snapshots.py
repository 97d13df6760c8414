"""Draw the merge as SVG frames.

Vehicles are filled by role; the dash-dotted outline around each human is
the disturbance set the planner is guarding against at that instant.

    python demos/snapshots.py out/
"""

import sys

from robust_levelk.cli import cmd_snapshot

out = sys.argv[1] if len(sys.argv) > 1 else "snapshots"
code = cmd_snapshot(None, [0.0, 1.0, 2.0, 3.0, 4.0, 5.0], out, strategy="adaptive")
print(f"wrote frames to {out}/" if code == 0 else f"failed with exit code {code}")
