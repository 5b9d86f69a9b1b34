"""Shrinking a graph by contracting low-resistance edges.

Run with ``python demos/03_coarsening.py``.
"""
import numpy as np

from ggd import coarsen_to_size, compute_ggd
from ggd.harness import random_connected_graph

rng = np.random.default_rng(5)
big = random_connected_graph(30, rng, weights=(0.5, 2.0))

# %% Every step contracts the edge with the smallest effective resistance.
small, trace = coarsen_to_size(big, 24)
for step in trace.steps:
    print(f"contract {step.edge}  R={step.resistance:.4f}  -> {step.node_count} nodes")

# %% Graphs of different sizes are compared after coarsening the larger one.
other = random_connected_graph(20, rng)
res = compute_ggd(big, other)
print("swapped:", res.swapped, " contractions:", len(res.coarsening_trace),
      " distance:", round(res.distance, 4))
