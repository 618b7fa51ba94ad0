"""Distance-based clustering of large node-attributed graphs.

Clusters are connected sets of nodes within a distance threshold of a seed,
where distance combines attribute similarity and neighborhood overlap.
Neighborhood overlap can be served from bottom-k sketches, keeping runs
near-linear in the edge count; thresholds are auto-tuned from declarative
attraction ratios.
"""

from .graph import (
    ActiveView,
    AttributedGraph,
    AttributeSchema,
    AttributeSpec,
    GraphFormatError,
    SemanticVector,
    build_graph,
    exact_l_neighborhood,
    load_graph,
    parse_schema,
)
from .distance import (
    COMBINED,
    EXACT,
    SEMANTIC,
    SKETCH,
    TOPOLOGICAL,
    DistanceConfig,
    NeighborhoodTable,
    combined_distance,
    discretized_semantic_distance,
    jaccard_distance,
    make_pair_distance,
    semantic_distance,
    topological_distance_exact,
    topological_distance_sketch,
)
from .sketch import (
    BottomKSketch,
    SketchTable,
    build_sketch_table,
    choose_k,
    estimate_jaccard_distance,
    node_ranks,
)
from .tuning import (
    EmpiricalCDF,
    TuningReport,
    compute_l,
    compute_tau,
    pair_sample_size,
    sample_distance_cdf,
    sample_pairs,
    tune_parameters,
)
from .clustering import (
    Cluster,
    Clustering,
    read_assignment,
    resolve_backend,
    run_stoc,
    run_variant,
    sto_query,
    write_clustering,
)
from .metrics import SemanticEmbedding, build_embedding, modularity, size_distribution, wcss
from .synth import PlantedSpec, generate, write_planted
from .estimator import SToC, check_graph
from . import oracle

__version__ = "0.1.0"

__all__ = [
    "ActiveView",
    "AttributedGraph",
    "AttributeSchema",
    "AttributeSpec",
    "BottomKSketch",
    "COMBINED",
    "Cluster",
    "Clustering",
    "DistanceConfig",
    "EXACT",
    "EmpiricalCDF",
    "GraphFormatError",
    "NeighborhoodTable",
    "PlantedSpec",
    "SEMANTIC",
    "SKETCH",
    "SToC",
    "SemanticEmbedding",
    "SemanticVector",
    "SketchTable",
    "TOPOLOGICAL",
    "TuningReport",
    "build_embedding",
    "build_graph",
    "build_sketch_table",
    "check_graph",
    "choose_k",
    "combined_distance",
    "compute_l",
    "compute_tau",
    "discretized_semantic_distance",
    "estimate_jaccard_distance",
    "exact_l_neighborhood",
    "generate",
    "jaccard_distance",
    "load_graph",
    "make_pair_distance",
    "modularity",
    "node_ranks",
    "oracle",
    "pair_sample_size",
    "parse_schema",
    "read_assignment",
    "resolve_backend",
    "run_stoc",
    "run_variant",
    "sample_distance_cdf",
    "sample_pairs",
    "semantic_distance",
    "size_distribution",
    "sto_query",
    "topological_distance_exact",
    "topological_distance_sketch",
    "tune_parameters",
    "wcss",
    "write_clustering",
    "write_planted",
]
