def solve(n):
    if n <= 0:
        return []
    return solve(n - 1) + [n]

print(solve(5))
