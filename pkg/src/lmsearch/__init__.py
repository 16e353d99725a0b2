"""Linear-memory tree search with budgeted deepening and threshold zooming."""
from .core import (
    INF,
    UNLIMITED,
    CapExceeded,
    DepthLimitError,
    Domain,
    NoSolutionError,
    Result,
    RunTrace,
    SearchError,
    SearchNode,
)
from .dfs import SearchOutcome, deepening
from .solvers import (
    ALGORITHMS,
    SolverReport,
    eda_star,
    ida_cr,
    ida_star,
    solve,
    zoomer,
    zzz_optimized,
    zzz_simple,
)

__version__ = "0.1.0"
