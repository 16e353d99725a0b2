"""Search-tree contract, cost arithmetic and run tracing shared by every solver.

A domain is anything that can hand out a root :class:`SearchNode`, produce the
ordered children of a node and tell whether a node is a goal.  Costs are plain
Python floats; all built-in domains emit integer edge costs so that sums,
doublings and midpoints stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple, Optional, Sequence

UNLIMITED = 2**64 - 1
"""Expansion budget meaning "no limit"."""

INF = math.inf


class SearchError(Exception):
    """Base class for search failures that are not ordinary outcomes."""


class DepthLimitError(SearchError):
    """Raised when the depth-first stack outgrows the configured hard limit."""


class NoSolutionError(SearchError):
    """Raised when a solver proves that the tree holds no goal."""


class CapExceeded(SearchError):
    """Raised when a solver spends its global expansion cap.

    The partial :class:`RunTrace` is available as ``trace``.
    """

    def __init__(self, trace: "RunTrace", cap: int):
        super().__init__(f"cap exceeded after {trace.total_expansions} expansions (cap={cap})")
        self.trace = trace
        self.cap = cap


class SearchNode(NamedTuple):
    state: Any
    f: float
    depth: int = 0


class Result(str, Enum):
    SOLUTION = "solution"
    NONE = "none"
    BUDGET_EXCEEDED = "budget_exceeded"


class Domain:
    """Base class for search trees.

    Subclasses set ``root`` and ``branching_bound`` and implement
    :meth:`children` and :meth:`is_goal`.  ``cost_unit`` is the number of
    internal cost units per displayed unit (Coconut stores costs x10).
    ``spec_line`` is the canonical one-line description, when there is one.
    """

    root: SearchNode
    branching_bound: int = 1
    cost_unit: float = 1.0
    spec_line: str = ""
    depth_hint: int = 256

    def children(self, node: SearchNode) -> Sequence[SearchNode]:
        raise NotImplementedError

    def is_goal(self, node: SearchNode) -> bool:
        raise NotImplementedError

    def kernel(self):
        """Compiled description of the tree, or None for Python-only domains."""
        return None

    def affine(self, scale: float = 1.0, shift: float = 0.0) -> "Domain":
        """Return the same tree with ``f' = scale * f + shift``."""
        if scale == 1.0 and shift == 0.0:
            return self
        return AffineCostDomain(self, scale, shift)


class AffineCostDomain(Domain):
    """Python-level view of another domain under an affine cost change."""

    def __init__(self, inner: Domain, scale: float, shift: float):
        if not scale > 0:
            raise ValueError("scale must be positive")
        self.inner = inner
        self.scale = float(scale)
        self.shift = float(shift)
        self.branching_bound = inner.branching_bound
        self.cost_unit = inner.cost_unit * self.scale
        self.depth_hint = inner.depth_hint
        self.spec_line = inner.spec_line
        self.root = self._wrap(inner.root)

    def _wrap(self, node):
        return SearchNode(node, self.scale * node.f + self.shift, node.depth)

    def children(self, node):
        return [self._wrap(c) for c in self.inner.children(node.state)]

    def is_goal(self, node):
        return self.inner.is_goal(node.state)

    def affine(self, scale=1.0, shift=0.0):
        if scale == 1.0 and shift == 0.0:
            return self
        return AffineCostDomain(self.inner, self.scale * scale, self.shift * scale + shift)


def normalize_root_cost(domain: Domain) -> Domain:
    """Translate costs so that the root costs exactly 1.

    Depth-first expansion order only depends on comparisons between costs, so
    it is unchanged by the translation.
    """
    return domain.affine(1.0, 1.0 - domain.root.f)


def scale_costs(domain: Domain, factor: float) -> Domain:
    """Multiply every cost (root included) by ``factor``."""
    return domain.affine(factor, 0.0)


def midpoint(a: float, b: float) -> float:
    return (a + b) / 2


def is_exact_cost(x: float) -> bool:
    """True if ``x`` is finite and an integer or dyadic rational below 2**53."""
    if not math.isfinite(x):
        return False
    m, _ = math.frexp(x)
    return abs(x) <= 2.0**53 and (m * 2**53).is_integer()


@dataclass(frozen=True)
class CallRecord:
    """One call to the budgeted depth-first search.

    ``k`` and ``j`` are the iteration / block indices of the solver that made
    the call, ``step`` says how the threshold was chosen and ``bracket`` is
    the (lower, upper, up_min) state seen right before the call, when the
    solver keeps one.
    """

    theta: float
    budget: int
    result: Result
    n_used: int
    theta_minus: float
    theta_plus: float
    k: Optional[int] = None
    j: Optional[int] = None
    step: str = ""
    bracket: Optional[tuple] = None

    def __post_init__(self):
        if self.n_used < 0:
            raise ValueError("n_used must be nonnegative")
        if not self.theta_minus <= self.theta:
            raise ValueError(f"theta_minus={self.theta_minus} above theta={self.theta}")
        # branch and bound may lower the threshold below theta_plus before the budget runs out
        if self.result is Result.NONE and not self.theta < self.theta_plus:
            raise ValueError(f"theta_plus={self.theta_plus} not above theta={self.theta}")


@dataclass
class RunTrace:
    calls: list = field(default_factory=list)
    total_expansions: int = 0
    skips: list = field(default_factory=list)  # (j, k, new_kmin) from the optimized ZZZ

    def __len__(self):
        return len(self.calls)


def count_expansion(trace: RunTrace, record: CallRecord) -> RunTrace:
    """Append ``record`` to ``trace`` and add its expansions to the total."""
    if record.n_used < 0:
        raise ValueError("n_used must be nonnegative")
    trace.calls.append(record)
    trace.total_expansions += record.n_used
    return trace
