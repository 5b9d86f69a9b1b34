"""Experiment tooling: distance matrices, classification, perturbations, datasets."""
from .classification import ClassificationReport, classify, classify_from_distances
from .datasets import dataset_distance, dataset_to_graph, knn_graph
from .experiments import (CutMismatch, DistanceMatrix, PairError, benchmark_pairs,
                          brute_force_cut_mismatch, distance_matrix, kernel_from_distances,
                          pearson, random_connected_graph, sample_pairs)
from .perturbation import PerturbationSpec, perturb, perturbation_study

__all__ = [
    "ClassificationReport", "CutMismatch", "DistanceMatrix", "PairError", "PerturbationSpec",
    "benchmark_pairs", "brute_force_cut_mismatch", "classify", "classify_from_distances",
    "dataset_distance", "dataset_to_graph", "distance_matrix", "kernel_from_distances",
    "knn_graph", "pearson", "perturb", "perturbation_study", "random_connected_graph",
    "sample_pairs",
]
