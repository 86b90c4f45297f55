# Reference guest program: greedy per-step assignment, heaviest boxes first,
# largest free robots first. Expects a global INSTANCE dict.
import json

state = INSTANCE["state"]
robots = sorted(state["robots"].items(), key=lambda kv: (-kv[1], kv[0]))
remaining = {k: v["weight"] for k, v in state["boxes"].items() if not v.get("lifted")}
steps = []

while remaining:
    free = list(robots)
    step = []
    lifted = []
    for box, weight in sorted(remaining.items(), key=lambda kv: (-kv[1], kv[0])):
        group = []
        cap = 0
        for r in list(free):
            group.append(r)
            free.remove(r)
            cap += r[1]
            if cap > weight:
                break
        if cap > weight:
            for r in group:
                step.append({"robot": r[0], "action": "lift", "args": [box]})
            lifted.append(box)
        else:
            free.extend(group)
            free.sort(key=lambda kv: (-kv[1], kv[0]))
    if not lifted:
        break
    for b in lifted:
        remaining.pop(b)
    steps.append(step)

print("===PLAN===")
print(json.dumps({"variant": "actions", "steps": steps}))
