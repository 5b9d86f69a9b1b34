"""Geodesic distance between two small graphs.

Run with ``python demos/01_distance_basics.py``.
"""
import numpy as np

from ggd import Graph, compute_ggd, ggd_airm, ggd_lerm, modified_laplacian

# %% Two single-edge graphs that differ only in the edge weight.
light = Graph.from_edges(2, [(0, 1, 1.0)])
heavy = Graph.from_edges(2, [(0, 1, 2.0)])
res = compute_ggd(light, heavy)
print("K2 weight 1 vs weight 2:", res.distance)
print("closed form ln(4+eps)/(2+eps):", np.log(4.0001 / 2.0001))

# %% The distance only depends on the generalized eigenvalues of the pencil.
print("pencil eigenvalues:", res.spectrum.values)

# %% Log-Euclidean distance agrees exactly when the Laplacians commute.
l1, l2 = modified_laplacian(light), modified_laplacian(heavy)
print("affine-invariant:", ggd_airm(l1, l2), " log-Euclidean:", ggd_lerm(l1, l2))

# %% A long chord changes a ring more than a short chord does.
ring = [(i, (i + 1) % 20) for i in range(20)]
base = Graph.from_edges(20, ring)
for chord in [(0, 2), (0, 10)]:
    d = compute_ggd(base, Graph.from_edges(20, ring + [chord])).distance
    print(f"ring vs ring + chord {chord}: {d:.4f}")
