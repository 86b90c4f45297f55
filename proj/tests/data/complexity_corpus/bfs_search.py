from collections import deque

frontier = deque([(0, 0)])
seen = {(0, 0)}
while frontier:
    x, y = frontier.popleft()
    for nx, ny in ((x+1, y), (x-1, y), (x, y+1), (x, y-1)):
        if 0 <= nx and 0 <= ny and (nx, ny) not in seen:
            seen.add((nx, ny))
            frontier.append((nx, ny))
