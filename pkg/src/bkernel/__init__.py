"""Boundaried kernelization for cut and transversal problems."""
from .errors import (
    ArityError,
    BkernelError,
    BudgetExceeded,
    MissingVertexError,
    ParameterError,
    ParseError,
    PreconditionError,
    ValidationError,
)
from .graph import (
    AnnotatedBoundariedGraph,
    BoundariedGraph,
    Graph,
    bipartite_coloring,
    bypass,
    bypass_set,
    components,
    glue,
    is_bipartite,
    parity_reachability,
)
from .kernel import KernelResult, TraceEntry

__version__ = "0.1.0"
