"""Uniresolution conversion and analysis of hierarchical connectivity networks."""

from .graph import (
    DomainError,
    Edge,
    Graph,
    Hierarchy,
    ParseError,
    ValidationError,
    VertexClassification,
    anchor,
    classify,
    load_graph,
    load_hierarchy,
    serialize_graph,
    serialize_hierarchy,
)
from .metrics import (
    CentralityTable,
    DegenerateFitError,
    DegreeFit,
    MetricsReport,
    centrality_suite,
    degree_fit,
    metrics_report,
    top_k,
)
from .resolution import (
    ProbabilityNet,
    ResolutionResult,
    disinherit,
    edge_order,
    inherit,
    kron_sampling,
    probability_weights,
)
from .spectral import (
    LaplacianView,
    NumericalError,
    effective_resistance,
    grounded_solve,
    kron_reduce,
    laplacian,
)

__version__ = "0.1.0"

__all__ = [
    "CentralityTable",
    "DegenerateFitError",
    "DegreeFit",
    "DomainError",
    "Edge",
    "Graph",
    "Hierarchy",
    "LaplacianView",
    "MetricsReport",
    "NumericalError",
    "ParseError",
    "ProbabilityNet",
    "ResolutionResult",
    "ValidationError",
    "VertexClassification",
    "anchor",
    "centrality_suite",
    "classify",
    "degree_fit",
    "disinherit",
    "edge_order",
    "effective_resistance",
    "grounded_solve",
    "inherit",
    "kron_reduce",
    "kron_sampling",
    "laplacian",
    "load_graph",
    "load_hierarchy",
    "metrics_report",
    "probability_weights",
    "serialize_graph",
    "serialize_hierarchy",
    "top_k",
]
