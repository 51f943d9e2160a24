"""Spectral Turan-type bounds for graphs with forbidden (induced) subgraphs.

Compute spectra and exact counts of small-to-medium graphs, evaluate the
spectral threshold formulas, check the supporting inequalities with margins,
and search for extremal graphs under forbidden-pattern constraints.
"""

from .graph import (
    Graph,
    GraphError,
    VertexSet,
    common_neighborhood,
    complement,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    from_edge_list,
    heawood_graph,
    induced_subgraph,
    kneser_graph,
    path_graph,
    petersen_graph,
    pp_incidence,
)
from .io import encode_graph6, named_graph, parse_graph6, read_graphs
from .spectral import SpectralSummary, closed_walks_4, full_spectrum, hofmeister_margin, spectral_radius
from .counting import (
    BudgetExceeded,
    PatternQuery,
    clique_number,
    count_c4,
    count_k2s,
    count_triangles,
    edges_in_common_neighborhood,
    find_pattern,
    independent_pair_degree_sum,
    independent_set_count,
    motzkin_straus_value,
    pair_degree_moment,
)
from .ramsey import RamseyValue, ramsey_brute_force, ramsey_lookup
from .bounds import BoundParams, BoundReport

__version__ = "0.1.0"
