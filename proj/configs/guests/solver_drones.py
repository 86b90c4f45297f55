# Reference guest program: serialize the crossings, one drone per time slot,
# through the hole center. Expects a global INSTANCE dict.
import json
import math

scene = INSTANCE["state"]["scene"]
hole = scene["hole"]
vmax = scene["v_max"]
safe = scene.get("safe_distance", 0.25)
speed = 0.8 * vmax
hy = (hole["y0"] + hole["y1"]) / 2.0
margin = max(3.0 * safe, 1.0)
entry_x = hole["x0"] - margin
exit_x = hole["x1"] + margin
going_right = hole.get("target_side", "right") == "right"
if not going_right:
    entry_x, exit_x = hole["x1"] + margin, hole["x0"] - margin
final_x = scene["bounds"][2] - 2.0 if going_right else scene["bounds"][0] + 2.0

cross_time = abs(exit_x - entry_x) / speed
slot_len = cross_time + 1.0

trajectories = {}
for idx, rid in enumerate(sorted(scene["robots"])):
    sx, sy = scene["robots"][rid]["start"]
    approach = math.dist((sx, sy), (entry_x, hy)) / speed
    t_entry = max(approach, idx * slot_len + 0.2)
    t_exit = t_entry + cross_time
    final = (final_x, 1.0 + idx * max(2.5 * safe, 1.0))
    t_final = t_exit + math.dist((exit_x, hy), final) / speed
    trajectories[rid] = [
        [sx, sy, 0.0],
        [entry_x, hy, t_entry],
        [exit_x, hy, t_exit],
        [final[0], final[1], t_final],
    ]

print("===PLAN===")
print(json.dumps({"variant": "waypoints", "trajectories": trajectories}))
