"""Budgeted depth-first deepening with branch and bound.

:func:`deepening` explores the subtree below a node in depth-first order,
expanding only nodes whose cost does not exceed the threshold.  It stops with
``Result.BUDGET_EXCEEDED`` as soon as it would need more expansions than the
budget allows.  Besides the result it reports the largest cost among visited
nodes within the threshold (``theta_minus``) and the smallest cost among
visited nodes beyond it (``theta_plus``).

The traversal uses an explicit stack so that very deep trees (chains of 10^4
nodes and more) do not hit the interpreter recursion limit.
"""
from __future__ import annotations

from collections import Counter
from typing import NamedTuple, Optional

from . import _kernel
from .core import (
    INF,
    UNLIMITED,
    DepthLimitError,
    Domain,
    Result,
    SearchNode,
)

DEFAULT_MAX_DEPTH = 10**6


class SearchOutcome(NamedTuple):
    result: Result
    n_used: int
    theta_minus: float
    theta_plus: float
    solution: Optional[SearchNode] = None
    fringe: Optional[dict] = None  # f-value -> count, only when requested

    @property
    def cost(self) -> float:
        return self.solution.f if self.solution is not None else INF


def deepening(domain: Domain, node: Optional[SearchNode] = None, theta: float = INF,
              budget: int = UNLIMITED, *, collect_fringe: bool = False,
              max_depth: int = DEFAULT_MAX_DEPTH, backend: str = "auto",
              workspace: Optional[_kernel.Workspace] = None) -> SearchOutcome:
    """Run one budgeted depth-first search from ``node`` (the root by default).

    ``collect_fringe`` additionally returns the multiset of costs of visited
    nodes beyond the threshold.  ``backend`` selects the compiled search
    (``"kernel"``), the pure Python one (``"python"``) or the compiled one
    whenever the domain provides it (``"auto"``).
    """
    search = Searcher(domain, node, max_depth=max_depth, backend=backend, workspace=workspace)
    return search(theta, budget, collect_fringe)


class Searcher:
    """Repeated deepening calls from one node, with the setup done once.

    Solvers issue up to millions of small calls; resolving the compiled
    search and its stack on every call would cost more than the search.
    """

    def __init__(self, domain: Domain, node: Optional[SearchNode] = None, *,
                 max_depth: int = DEFAULT_MAX_DEPTH, backend: str = "auto",
                 workspace: Optional[_kernel.Workspace] = None):
        self.domain = domain
        self.node = domain.root if node is None else node
        self.max_depth = max_depth
        spec = domain.kernel() if backend != "python" else None
        if backend == "kernel" and spec is None:
            raise ValueError(f"{type(domain).__name__} has no compiled kernel")
        self.spec = spec
        if spec is not None:
            self.search, self.search_fringe = _kernel.specialize(
                spec.n_children, spec.child, spec.is_goal)
            if workspace is None:
                workspace = _kernel.Workspace(min(max(spec.depth_hint, 16), max_depth + 1))
        self.workspace = workspace

    def __call__(self, theta: float, budget: int = UNLIMITED,
                 collect_fringe: bool = False) -> SearchOutcome:
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.spec is None:
            return _deepening_python(self.domain, self.node, theta, budget, collect_fringe,
                                     self.max_depth)
        return self._kernel_call(float(theta), min(budget, _kernel.MAX_BUDGET), collect_fringe)

    def _kernel_call(self, theta, budget, collect_fringe):
        spec, node, ws = self.spec, self.node, self.workspace
        while True:
            args = (spec.params, node.state, float(node.f), spec.scale, theta, budget,
                    ws.states, ws.fs, ws.next_child, ws.n_child)
            if collect_fringe:
                (status, used, lo, hi, s, f, depth), fringe = self.search_fringe(*args)
            else:
                status, used, lo, hi, s, f, depth = self.search(*args)
            if status != _kernel.STATUS_OVERFLOW:
                break
            if ws.capacity >= self.max_depth + 1:
                raise DepthLimitError(f"depth limit {self.max_depth} exceeded")
            ws.allocate(min(2 * ws.capacity, self.max_depth + 1))
        fr = dict(fringe) if collect_fringe else None
        if status == _kernel.STATUS_BUDGET:
            return SearchOutcome(Result.BUDGET_EXCEEDED, used, lo, hi, None, fr)
        if status == _kernel.STATUS_SOLUTION:
            sol = SearchNode(int(s), float(f), node.depth + int(depth))
            return SearchOutcome(Result.SOLUTION, used, lo, hi, sol, fr)
        return SearchOutcome(Result.NONE, used, lo, hi, None, fr)


def _deepening_python(domain, node, theta, budget, collect_fringe, max_depth):
    children = domain.children
    is_goal = domain.is_goal
    fringe = Counter() if collect_fringe else None
    top_key = -INF
    used = 0
    lo, hi = -INF, INF
    best = None
    stack = [iter((node,))]
    push, pop = stack.append, stack.pop
    while stack:
        for n in stack[-1]:
            c = n.f
            if c > theta:
                if c < hi:
                    hi = c
                if fringe is not None:
                    top_key = _record_fringe(fringe, c, top_key)
                continue
            if c > lo:
                lo = c
            if is_goal(n):
                if best is None or c < best.f:
                    best = n
                    theta = c  # branch and bound
                continue
            if used == budget:
                return SearchOutcome(Result.BUDGET_EXCEEDED, used, lo, hi, None,
                                     dict(fringe) if fringe is not None else None)
            if len(stack) > max_depth + 1:
                raise DepthLimitError(f"depth limit {max_depth} exceeded")
            used += 1
            push(iter(children(n)))
            break
        else:
            pop()
    result = Result.SOLUTION if best is not None else Result.NONE
    return SearchOutcome(result, used, lo, hi, best, dict(fringe) if fringe is not None else None)


def _record_fringe(fringe, v, top_key):
    # same bucketing as the compiled search
    if v in fringe:
        fringe[v] += 1
    elif len(fringe) < _kernel.MAX_FRINGE_VALUES:
        fringe[v] = 1
        top_key = max(top_key, v)
    elif v > top_key:
        fringe[v] = fringe.pop(top_key) + 1
        top_key = v
    else:
        fringe[top_key] += 1
    return top_key
