"""Three planners, one merge.

The autonomous car starts in the middle lane and wants the left lane. A
level-1 driver is already there, slightly ahead. We replay the same episode
under each strategy without plant noise and look at where the merge settles.

    python demos/lane_change_story.py
"""

from dataclasses import replace

from robust_levelk import default_scenario, run

cfg = default_scenario()
av = cfg.av.agent_id

print("strategy   completion_x   first action")
for strategy in ("nominal", "adaptive", "robust"):
    records, summary = run(replace(cfg, strategy=strategy))
    x = "never" if summary.completion_x is None else f"{summary.completion_x:6.1f} m"
    print(f"{strategy:9s}  {x:>12s}   {records[0].actions[av]}")

# Nominal trusts its predictions and cuts in early. Robust keeps the worst
# case of every driver model in view and waits for the gap to open. Adaptive
# starts as cautious as robust, but shrinks the set around the left-lane
# driver once it has watched that driver behave like a level-1 agent.
