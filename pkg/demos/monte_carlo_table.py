"""Collision and lane-change rates over randomized traffic.

Each run jitters the humans' starting positions and switches on plant noise.
Run ``i`` sees the same traffic under every strategy, so differences come
from the planner alone. Pass a run count to go faster or slower.

    python demos/monte_carlo_table.py 40
"""

import sys
from dataclasses import replace

from robust_levelk import default_scenario, monte_carlo

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 100
cfg = default_scenario()

print(f"{runs} runs per strategy")
print("strategy   collisions   lane changes   mean completion_x")
for strategy in ("nominal", "adaptive", "robust"):
    res = monte_carlo(replace(cfg, strategy=strategy), runs)
    mean = "-" if res.mean_completion_x is None else f"{res.mean_completion_x:.1f} m"
    print(f"{strategy:9s}  {res.collision_rate:10.0%}   {res.lane_change_rate:12.0%}   {mean:>17s}")
