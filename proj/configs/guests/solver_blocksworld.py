# Reference guest program: unstack everything to the table, then rebuild the
# goal towers bottom-up. Expects a global INSTANCE dict.
import json

state = INSTANCE["state"]
goal_towers = INSTANCE["goal_towers"]
towers = [list(t) for t in state["towers"]]
holding = state.get("holding")
steps = []


def act(name, args):
    steps.append([{"robot": "arm", "action": name, "args": args}])


if holding:
    act("putdown", [holding])
    towers.append([holding])
    holding = None

changed = True
while changed:
    changed = False
    for t in towers:
        if len(t) > 1:
            top = t.pop()
            act("unstack", [top, t[-1]])
            act("putdown", [top])
            towers.append([top])
            changed = True
            break

for gt in goal_towers:
    for i in range(1, len(gt)):
        act("pickup", [gt[i]])
        act("stack", [gt[i], gt[i - 1]])

print("===PLAN===")
print(json.dumps({"variant": "actions", "steps": steps}))
