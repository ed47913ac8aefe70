"""Graph-limit distances: edit distance, fractional overlay distance, cut norm,
and desk-scale extremal experiments on step graphons."""

from .graphs import (Graph, blow_up, complete_graph, cycle_graph, empty_graph, erdos_renyi,
                     example_4_1_pair, path_graph, read_graph, turan_graph, write_graph)
from .stepgraphon import (StepGraphon, StepKernel, common_refinement, complete_multipartite,
                          constant, degree_function, embed_graph, l1_distance_aligned,
                          permute_parts, split_part)
from .density import density_graph, density_graphon, edge_density
from .cutnorm import cut_norm_exact, cut_norm_heuristic, graph_cut_distance_same_order
from .editdist import EditResult, edit_distance_exact, edit_distance_heuristic
from .fracdist import (OverlayMatrix, PermutationDecomposition, birkhoff_approximate,
                       delta1_blowup_upper, delta1_lower, delta1_objective, delta1_upper,
                       factor3_check)
from .extremal import clique_density_optimize, degree_regularity_gap, l1_to_multipartite
from .sampler import convergence_gap, sample_w_random
from .harness import stability_experiment, verify_example_4_1

__version__ = "0.1.0"
