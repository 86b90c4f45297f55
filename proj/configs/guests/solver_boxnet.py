# Reference guest program: route each box along arm-equipped cells with BFS,
# one box at a time, then place it. Expects a global INSTANCE dict.
import json
from collections import deque

state = INSTANCE["state"]
W, H = state["width"], state["height"]
arm_at = {tuple(cell): arm for arm, cell in state["arms"].items()}
goals = {color: tuple(cell) for color, cell in state["goals"].items()}
dirs = {"up": (0, 1), "down": (0, -1), "left": (-1, 0), "right": (1, 0)}
steps = []

for box, info in sorted(state["boxes"].items()):
    if info.get("placed"):
        continue
    color = box[4:] if box.startswith("box_") else box
    target = goals[color]
    start = tuple(info["cell"])
    prev = {start: None}
    q = deque([start])
    while q:
        cur = q.popleft()
        if cur == target:
            break
        if cur not in arm_at:
            continue
        for d, (dx, dy) in dirs.items():
            nxt = (cur[0] + dx, cur[1] + dy)
            if not (0 <= nxt[0] < W and 0 <= nxt[1] < H):
                continue
            if nxt not in prev:
                prev[nxt] = (cur, d)
                q.append(nxt)
    if target not in prev:
        continue
    path = []
    node = target
    while prev[node] is not None:
        parent, d = prev[node]
        path.append((parent, d))
        node = parent
    path.reverse()
    for cell, d in path:
        steps.append([{"robot": arm_at[cell], "action": "move_box", "args": [box, d]}])
    steps.append([{"robot": arm_at[target], "action": "place_box", "args": [box]}])

print("===PLAN===")
print(json.dumps({"variant": "actions", "steps": steps}))
