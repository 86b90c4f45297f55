# Reference guest program: BFS over (cell, visited-goal mask).
# Expects a global INSTANCE dict injected above this body.
import json
from collections import deque

state = INSTANCE["state"]
W, H = state["width"], state["height"]
obstacles = {tuple(c) for c in state["obstacles"]}
goals = [tuple(c) for c in state["goals"]]
visited0 = state.get("visited", [False] * len(goals))
start = tuple(state["robot"])

mask0 = 0
for i, v in enumerate(visited0):
    if v:
        mask0 |= 1 << i
target = (1 << len(goals)) - 1 if goals else 0

moves = {"move_up": (0, 1), "move_down": (0, -1),
         "move_left": (-1, 0), "move_right": (1, 0)}
start_node = (start, mask0)
prev = {start_node: None}
q = deque([start_node])
goal_node = start_node if mask0 == target else None
while q and goal_node is None:
    pos, mask = q.popleft()
    if pos in goals:
        gi = goals.index(pos)
        if not (mask >> gi) & 1:
            node = (pos, mask | (1 << gi))
            if node not in prev:
                prev[node] = ((pos, mask), "visit_goal")
                if node[1] == target:
                    goal_node = node
                    break
                q.append(node)
    for name, (dx, dy) in moves.items():
        np_ = (pos[0] + dx, pos[1] + dy)
        if not (0 <= np_[0] < W and 0 <= np_[1] < H):
            continue
        if np_ in obstacles:
            continue
        node = (np_, mask)
        if node not in prev:
            prev[node] = ((pos, mask), name)
            q.append(node)

steps = []
node = goal_node
while node is not None and prev[node] is not None:
    parent, act = prev[node]
    steps.append([{"robot": "robot", "action": act, "args": []}])
    node = parent
steps.reverse()
print("===PLAN===")
print(json.dumps({"variant": "actions", "steps": steps}))
