"""Comparing point clouds through their nearest-neighbour graphs.

Run with ``python demos/05_datasets.py``.
"""
import numpy as np

from ggd.harness import dataset_distance, dataset_to_graph

rng = np.random.default_rng(7)
centers2 = np.array([[0.0, 0.0], [2.0, 0.0]])
centers3 = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 2.0]])
two = np.concatenate([c + 0.6 * rng.normal(size=(30, 2)) for c in centers2])
three = np.concatenate([c + 0.6 * rng.normal(size=(20, 2)) for c in centers3])

# %% Pruning drops the edges that carry the least resistance-weighted current.
g = dataset_to_graph(two, k=10)
pruned = dataset_to_graph(two, k=10, prune_fraction=0.3)
print("edges before/after pruning:", g.edge_count, pruned.edge_count)

# %% Reordering the rows does not change the distance; a different cluster layout does.
print("two clusters vs shuffled copy:", dataset_distance(two, two[rng.permutation(60)]))
print("two clusters vs three clusters:", dataset_distance(two, three, prune_fraction=0.3))
