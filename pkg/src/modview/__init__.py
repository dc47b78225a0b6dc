"""Statistically validated hierarchical graph clustering and visualization.

The pipeline: load a graph, find its maximal-modularity partition, test it
against a configuration-model null, grow a cluster tree (refinements below
the best level, least-loss merges above), lay out the quotient graph with
size-weighted forces, and explore the result through frontier moves, with
per-cluster categorical enrichment for coloring.
"""

from .graph import (
    Graph,
    GraphError,
    EdgeListParseError,
    QuotientGraph,
    connected_components,
    induced_subgraph,
    largest_component_subgraph,
    load_attributes,
    load_edge_list,
    quotient_graph,
)
from .modularity import (
    MaximizerConfig,
    ModularityError,
    Partition,
    brute_force_optimal,
    cluster_aggregates,
    greedy_maximize,
    merge_delta,
    modularity,
    partition_from_tsv,
    partition_to_tsv,
)
from .significance import (
    NullDistribution,
    SignificanceError,
    derive_seed,
    effective_alpha,
    is_significant,
    null_distribution,
    p_value,
    sample_configuration_graph,
)
from .generators import (
    attributed_blocks,
    barbell_cliques,
    edge_list_text,
    gnp_random_graph,
    planted_cliques,
    random_connected_graph,
    two_level_cliques,
)
from .hierarchy import (
    ClusterNode,
    ClusterTree,
    HierarchyError,
    MergeStep,
    RefinementDecision,
    ViewState,
    build_hierarchy,
    coarsen_chain,
    coarsen_view,
    initial_view,
    refine_cluster,
    refine_view,
    view_from_frontier,
)
from .layout import (
    Layout,
    LayoutConfig,
    LayoutError,
    coarsen_layout,
    fr_layout,
    pair_equilibrium_distance,
    refine_layout,
)
from .stats import (
    AttributeStats,
    ClusterStats,
    StatsError,
    chi2_sf,
    cluster_chi2,
    pearson_residual,
    regularized_gamma_q,
    stats_table,
)
from .session import PipelineParams, Session, SessionError, SessionStore

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "EdgeListParseError",
    "QuotientGraph",
    "connected_components",
    "induced_subgraph",
    "largest_component_subgraph",
    "load_attributes",
    "load_edge_list",
    "quotient_graph",
    "MaximizerConfig",
    "ModularityError",
    "Partition",
    "brute_force_optimal",
    "cluster_aggregates",
    "greedy_maximize",
    "merge_delta",
    "modularity",
    "partition_from_tsv",
    "partition_to_tsv",
    "NullDistribution",
    "SignificanceError",
    "derive_seed",
    "effective_alpha",
    "is_significant",
    "null_distribution",
    "p_value",
    "sample_configuration_graph",
    "attributed_blocks",
    "barbell_cliques",
    "edge_list_text",
    "gnp_random_graph",
    "planted_cliques",
    "random_connected_graph",
    "two_level_cliques",
    "ClusterNode",
    "ClusterTree",
    "HierarchyError",
    "MergeStep",
    "RefinementDecision",
    "ViewState",
    "build_hierarchy",
    "coarsen_chain",
    "coarsen_view",
    "initial_view",
    "refine_cluster",
    "refine_view",
    "view_from_frontier",
    "Layout",
    "LayoutConfig",
    "LayoutError",
    "coarsen_layout",
    "fr_layout",
    "pair_equilibrium_distance",
    "refine_layout",
    "AttributeStats",
    "ClusterStats",
    "StatsError",
    "chi2_sf",
    "cluster_chi2",
    "pearson_residual",
    "regularized_gamma_q",
    "stats_table",
    "PipelineParams",
    "Session",
    "SessionError",
    "SessionStore",
    "__version__",
]
