"""Convex clustering of collections of graphs on a shared node set.

Each graph is one slice of a ``(T, p, p)`` tensor; slices are fused toward
common centroids by a Schatten-norm penalty on their pairwise differences.
"""

from .admm import (AdmmResult, AdmmSolver, AdmmState, ClusterAssignment,
                   DifferenceOperator, admm_solve, build_difference_operator,
                   extract_clusters, objective, refit_centroids)
from .baselines import (adjusted_rand_index, edge_features, kmeans,
                        spectra_features)
from .io import load_dataset, save_dataset
from .path import (ClusterPath, Dendrogram, build_dendrogram, compute_path,
                   cut_at_k)
from .prox import (prox_schatten, project_l1_ball, project_nuclear_ball,
                   schatten_norm)
from .synth import (GraphonSpec, SbmSpec, graphon_sample,
                    make_changepoint_dataset, make_two_cluster_dataset,
                    permute_nodes, sbm_sample)
from .tensor import (GraphTensor, StackedMatrix, matricize,
                     pairwise_frobenius_distances, tensorize)
from .weights import (FusionWeights, chain_weights, hybrid_weights,
                      is_connected, rbf_weights, uniform_weights)

__version__ = "0.1.0"
