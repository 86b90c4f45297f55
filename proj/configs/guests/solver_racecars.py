# Reference guest program: BFS on a coarse occupancy grid around the polygon
# obstacles, timed at 80% of the speed limit. Expects a global INSTANCE dict.
import json
import math
from collections import deque

scene = INSTANCE["state"]["scene"]
xmin, ymin, xmax, ymax = scene["bounds"]
CELL = 0.25
vmax = scene["v_max"]
safe = scene.get("safe_distance", 0.0)
obstacles = [o["vertices"] for o in scene.get("obstacles", [])]


def seg_dist(p, a, b):
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return math.dist(p, a)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    return math.dist(p, (ax + t * dx, ay + t * dy))


def in_poly(p, poly):
    inside = False
    j = len(poly) - 1
    for i in range(len(poly)):
        xi, yi = poly[i]
        xj, yj = poly[j]
        if (yi > p[1]) != (yj > p[1]):
            xc = xi + (p[1] - yi) / (yj - yi) * (xj - xi)
            if p[0] < xc:
                inside = not inside
        j = i
    return inside


def poly_dist(p, poly):
    if in_poly(p, poly):
        return 0.0
    return min(seg_dist(p, poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly)))


def blocked(p):
    return any(poly_dist(p, poly) < safe + 0.15 for poly in obstacles)


W = int((xmax - xmin) / CELL)
H = int((ymax - ymin) / CELL)


def center(i, j):
    return (xmin + (i + 0.5) * CELL, ymin + (j + 0.5) * CELL)


trajectories = {}
for rid in sorted(scene["robots"]):
    spec = scene["robots"][rid]
    sx, sy = spec["start"]
    goal = spec.get("goal_region")
    si = min(W - 1, max(0, int((sx - xmin) / CELL)))
    sj = min(H - 1, max(0, int((sy - ymin) / CELL)))
    prev = {(si, sj): None}
    q = deque([(si, sj)])
    end = None
    while q:
        cur = q.popleft()
        cx, cy = center(*cur)
        if goal and goal[0] <= cx <= goal[2] and goal[1] <= cy <= goal[3]:
            end = cur
            break
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nxt = (cur[0] + dx, cur[1] + dy)
            if not (0 <= nxt[0] < W and 0 <= nxt[1] < H):
                continue
            if nxt in prev or blocked(center(*nxt)):
                continue
            prev[nxt] = cur
            q.append(nxt)
    pts = [(sx, sy)]
    if end is not None:
        chain = []
        node = end
        while node is not None:
            chain.append(center(*node))
            node = prev[node]
        chain.reverse()
        pts.extend(chain)
    traj = [[sx, sy, 0.0]]
    t = 0.0
    for k in range(1, len(pts)):
        d = math.dist(pts[k - 1], pts[k])
        if d < 1e-9:
            continue
        t += d / (0.8 * vmax)
        traj.append([pts[k][0], pts[k][1], t])
    trajectories[rid] = traj

print("===PLAN===")
print(json.dumps({"variant": "waypoints", "trajectories": trajectories}))
