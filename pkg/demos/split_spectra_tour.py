"""Spectral radii of split graphs: closed forms vs iteration.

A split graph here is a clique joined to independent vertices (plus one
partially attached vertex when the edge count does not divide evenly).
These graphs maximize the spectral radius among graphs with a fixed number
of edges, and their radii have exact expressions we can check numerically.
"""

import math

from sslab import perron, split_graph, split_lambda

print("exact formula vs eigensolver")
print(f"{'k':>3} {'m':>6} {'lambda (exact)':>16} {'lambda (iter)':>16} {'diff':>10}")
for k in (1, 2, 3, 5):
    for m in (10, 100, 1000):
        if m < k * (k - 1) // 2:
            continue
        lam = split_lambda(k, m)
        pd = perron(split_graph(k, m))
        print(f"{k:>3} {m:>6} {lam:>16.10f} {pd.lam:>16.10f} {abs(lam-pd.lam):>10.2e}")

print()
print("each extra edge lifts the radius by at least 1/(2k(sqrt(m)+k))")
k = 2
for m in (50, 500, 5000):
    gap = split_lambda(k, m) - split_lambda(k, m - 1)
    floor = 1 / (2 * k * (math.sqrt(m) + k))
    print(f"  m={m:<6} gap={gap:.6f}  floor={floor:.6f}")

print()
print("large-m behavior: lambda ~ sqrt(m) + (k-1)/2")
for k in (2, 4, 6):
    for m in (10**3, 10**5):
        dev = split_lambda(k, m) - math.sqrt(m) - (k - 1) / 2
        print(f"  k={k} m={m:<7} deviation={dev:+.6f}")
