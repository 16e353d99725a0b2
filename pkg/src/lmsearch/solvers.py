"""Threshold-driving tree search algorithms built on :func:`deepening`.

All solvers return a :class:`SolverReport` whose ``solution_cost`` is
expressed in the caller's cost coordinates, and raise
:class:`~lmsearch.core.CapExceeded` when the global expansion cap is spent.
Domains whose root costs zero or less are searched with translated costs
(root at 1) and the solution cost is translated back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ._kernel import Workspace
from .core import (
    INF,
    UNLIMITED,
    CallRecord,
    CapExceeded,
    Domain,
    NoSolutionError,
    Result,
    RunTrace,
    SearchNode,
    count_expansion,
    normalize_root_cost,
)
from .dfs import Searcher, SearchOutcome
from .sched import a6519

DEFAULT_CAP = 10**8


@dataclass
class ZoomState:
    lower: float
    upper: float
    up_min: float
    n0: int
    k: int = 0

    def snapshot(self):
        return (self.lower, self.upper, self.up_min)


@dataclass
class SolverReport:
    algorithm: str
    solution: SearchNode
    solution_cost: float
    expansions: int
    trace: RunTrace
    iterations: int
    shift: float = 0.0  # translation applied to the costs inside the trace


class _Runner:
    """Issues deepening calls, records them and enforces the expansion cap."""

    def __init__(self, domain: Domain, cap: int, backend: str):
        self.shift = 0.0
        if domain.root.f <= 0:
            self.shift = 1.0 - domain.root.f
            domain = normalize_root_cost(domain)
        self.domain = domain
        self.root = domain.root
        self.cap = cap
        self.backend = backend
        self.trace = RunTrace()
        self.search = Searcher(domain, backend=backend,
                               workspace=Workspace(min(max(domain.depth_hint, 16), 1 << 20)))

    def call(self, theta, budget=UNLIMITED, collect_fringe=False, **meta) -> SearchOutcome:
        room = self.cap - self.trace.total_expansions
        capped = budget > room
        out = self.search(theta, min(budget, room), collect_fringe)
        count_expansion(self.trace, CallRecord(theta, budget, out.result, out.n_used,
                                               out.theta_minus, out.theta_plus, **meta))
        if capped and out.result is Result.BUDGET_EXCEEDED:
            raise CapExceeded(self.trace, self.cap)
        return out

    def report(self, algorithm, out, iterations):
        sol = out.solution
        return SolverReport(algorithm, sol, sol.f - self.shift, self.trace.total_expansions,
                            self.trace, iterations, self.shift)


def _exhausted(out):
    if out.result is Result.NONE and math.isinf(out.theta_plus):
        raise NoSolutionError("every node was expanded without reaching a goal")


def ida_star(domain: Domain, cap: int = DEFAULT_CAP, backend: str = "auto") -> SolverReport:
    """IDA*: unlimited deepening calls, each at the previous call's theta_plus."""
    run = _Runner(domain, cap, backend)
    theta = run.root.f
    k = 0
    while True:
        out = run.call(theta, k=k)
        if out.result is Result.SOLUTION:
            return run.report("ida_star", out, k + 1)
        _exhausted(out)
        theta = out.theta_plus
        k += 1


def _first_exponent(f_root, unit, gamma):
    k = math.ceil(math.log(f_root / unit, gamma))
    while unit * gamma ** (k - 1) >= f_root:
        k -= 1
    while unit * gamma**k < f_root:
        k += 1
    return k


def eda_star(domain: Domain, gamma: float = 2.0, cap: int = DEFAULT_CAP,
             backend: str = "auto") -> SolverReport:
    """EDA*(gamma): unlimited deepening calls at thresholds ``gamma**k``.

    Thresholds are powers of ``gamma`` in displayed cost units (for Coconut,
    raw costs are ten times the displayed ones), starting with the smallest
    one not below the root cost.
    """
    if not gamma > 1:
        raise ValueError("gamma must exceed 1")
    run = _Runner(domain, cap, backend)
    unit = run.domain.cost_unit
    k = _first_exponent(run.root.f, unit, gamma)
    n = 0
    while True:
        out = run.call(unit * gamma**k, k=k)
        n += 1
        if out.result is Result.SOLUTION:
            return run.report("eda_star", out, n)
        _exhausted(out)
        k += 1


def next_cr_threshold(fringe: dict, target: float) -> float:
    """Smallest fringe cost whose cumulative count reaches ``target``.

    Falls back to the largest fringe cost when no value qualifies.
    """
    total = 0
    for v in sorted(fringe):
        total += fringe[v]
        if total >= target:
            return v
    return max(fringe)


def ida_cr(domain: Domain, b: int = 2, cap: int = DEFAULT_CAP,
           backend: str = "auto") -> SolverReport:
    """IDA*_CR: pick the next threshold from the costs seen in the fringe.

    The next threshold is the smallest fringe cost ``v`` such that at least
    ``(b - 1) * n_used`` fringe nodes cost at most ``v``.
    """
    if b < 2:
        raise ValueError("b must be at least 2")
    run = _Runner(domain, cap, backend)
    theta = run.root.f
    k = 0
    while True:
        out = run.call(theta, collect_fringe=True, k=k)
        if out.result is Result.SOLUTION:
            return run.report("ida_cr", out, k + 1)
        _exhausted(out)
        theta = next_cr_threshold(out.fringe, (b - 1) * out.n_used)
        k += 1


def zoomer(domain: Domain, cap: int = DEFAULT_CAP, backend: str = "auto") -> SolverReport:
    """Zoomer: exponential search on the threshold under doubling budgets.

    Iteration ``k`` gives every deepening call a budget of ``N0 * 2**k``
    expansions, where ``N0`` is the number of expansions at the root cost, and
    brackets the threshold between ``lower`` (searched completely) and
    ``upper`` (budget exceeded).  The iteration ends once ``upper`` has come
    down to ``up_min``, the cheapest cost not yet below ``lower``.
    """
    return _zoomer(domain, cap, backend)


def _zoomer(domain, cap=DEFAULT_CAP, backend="auto", tighten_upper=True):
    # tighten_upper=False sets upper to theta instead of theta_minus; tests use it as a mutant
    run = _Runner(domain, cap, backend)
    z = ZoomState(run.root.f, INF, INF, 0)
    out = run.call(z.lower, k=0, step="root")
    if out.result is Result.SOLUTION:
        return run.report("zoomer", out, 0)
    _exhausted(out)
    z.n0, z.up_min = out.n_used, out.theta_plus
    k = 0
    while True:
        k += 1
        z.k = k
        z.upper = INF
        while z.upper != z.up_min:
            if z.upper == INF:
                theta, step = 2 * z.lower, "double"
            else:
                theta, step = (z.upper + z.lower) / 2, "half"
            theta = max(theta, z.up_min)
            out = run.call(theta, z.n0 * 2**k, k=k, step=step, bracket=z.snapshot())
            if out.result is Result.SOLUTION:
                return run.report("zoomer", out, k)
            if out.result is Result.BUDGET_EXCEEDED:
                z.upper = out.theta_minus if tighten_upper else theta
            else:
                _exhausted(out)
                z.lower = theta
                z.up_min = out.theta_plus


def zzz_simple(domain: Domain, cap: int = DEFAULT_CAP, backend: str = "auto") -> SolverReport:
    """ZigZagZoomer, simple version.

    The Zoomer iterations become programs interleaved by the uniform doubling
    schedule: block ``j`` advances program ``k = log2(A6519(j))`` by one
    deepening call with budget ``N0 * 2**k``.  Each program keeps its own
    bracket; a call that exceeds its budget sets the program's upper bound to
    the threshold itself.
    """
    run = _Runner(domain, cap, backend)
    f_root = run.root.f
    lower = [f_root]
    upper = []
    out = run.call(f_root, k=0, j=0, step="root")
    if out.result is Result.SOLUTION:
        return run.report("zzz_simple", out, 0)
    _exhausted(out)
    n0 = out.n_used
    j = 0
    while True:
        j += 1
        k = a6519(j).bit_length() - 1
        while k >= len(lower):
            lower.append(f_root)
        while k >= len(upper):
            upper.append(None)
        if upper[k] is None:
            theta, step = 2 * lower[k], "double"
        else:
            theta, step = (upper[k] + lower[k]) / 2, "half"
        out = run.call(theta, n0 * 2**k, k=k, j=j, step=step,
                       bracket=(lower[k], INF if upper[k] is None else upper[k], None))
        if out.result is Result.SOLUTION:
            return run.report("zzz_simple", out, j)
        if out.result is Result.BUDGET_EXCEEDED:
            upper[k] = theta
        else:
            _exhausted(out)
            lower[k] = theta


def zzz_optimized(domain: Domain, cap: int = DEFAULT_CAP, backend: str = "auto") -> SolverReport:
    """ZigZagZoomer, optimized version.

    All programs share ``lower`` and ``up_min``: a call that completes within
    budget proves that no solution is cheaper than its threshold, for every
    program.  Programs whose upper bound has fallen to ``up_min`` cannot
    succeed; they and all smaller programs are skipped from then on by only
    visiting block indices that are multiples of ``2**kmin``.
    """
    run = _Runner(domain, cap, backend)
    lower = run.root.f
    upper = {}
    out = run.call(lower, k=0, j=0, step="root")
    if out.result is Result.SOLUTION:
        return run.report("zzz_optimized", out, 0)
    _exhausted(out)
    n0, up_min = out.n_used, out.theta_plus
    kmin = 0
    j = 0
    blocks = 0
    while True:
        j += 1 << kmin
        k = a6519(j).bit_length() - 1
        if k in upper:
            if upper[k] <= up_min:
                kmin = k + 1
                j -= 1 << k
                run.trace.skips.append((j, k, kmin))
                continue
            theta, step = (upper[k] + lower) / 2, "half"
        else:
            theta, step = 2 * lower, "double"
        theta = max(theta, up_min)
        blocks += 1
        out = run.call(theta, n0 * 2**k, k=k, j=j, step=step,
                       bracket=(lower, upper.get(k, INF), up_min))
        if out.result is Result.SOLUTION:
            return run.report("zzz_optimized", out, blocks)
        if out.result is Result.BUDGET_EXCEEDED:
            upper[k] = out.theta_minus
        else:
            _exhausted(out)
            lower = theta
            up_min = out.theta_plus


ALGORITHMS = {
    "ida_star": ida_star,
    "eda_star": eda_star,
    "ida_cr": ida_cr,
    "zoomer": zoomer,
    "zzz_simple": zzz_simple,
    "zzz_optimized": zzz_optimized,
}


def solve(name: str, domain: Domain, cap: int = DEFAULT_CAP,
          backend: str = "auto") -> SolverReport:
    try:
        fn = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None
    return fn(domain, cap=cap, backend=backend)
