# Reference guest program: place box i on slot i, picking one box at a time.
# Expects a global INSTANCE dict.
import json
import math

scene = INSTANCE["state"]["scene"]
shape = INSTANCE["state"]["shape"]
slots = shape["slots"]
vmax = scene["v_max"]
trajectories = {}
t = 0.0
for i, rid in enumerate(sorted(scene["robots"])):
    sx, sy = scene["robots"][rid]["start"]
    cx, cy = slots[i]["center"]
    dur = max(math.dist((sx, sy), (cx, cy)) / (0.8 * vmax), 0.2)
    trajectories[rid] = [[sx, sy, t], [cx, cy, t + dur]]
    t += dur + 0.2

print("===PLAN===")
print(json.dumps({"variant": "waypoints", "trajectories": trajectories}))
