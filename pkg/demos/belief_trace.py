"""Watching the belief move.

In the adaptive run the planner keeps a probability that each human is a
level-0 driver. Every step it compares what the human did against what a
level-0 and a level-1 driver would have done, and nudges the probability
towards whichever was closer. Drivers whose two predictions agree teach it
nothing, so their belief never moves.

    python demos/belief_trace.py
"""

from dataclasses import replace

from robust_levelk import default_scenario, run

cfg = default_scenario()
records, _ = run(replace(cfg, strategy="adaptive"))

ids = cfg.opponent_ids
print("   t  " + "  ".join(f"p0[{i}]  set[{i}] (m)" for i in ids))
for r in records:
    cells = []
    for i in ids:
        wx, wy = r.set_half_widths[i]
        cells.append(f"{r.p_level0[i]:5.3f}  {wx:4.2f} x {wy:4.2f}")
    print(f"{r.time:4.1f}  " + "  ".join(cells))
