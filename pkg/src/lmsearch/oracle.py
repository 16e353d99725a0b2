"""Brute-force ground truth for small instances.

:func:`profile` enumerates the tree best-first, in nondecreasing cost order,
through every node that costs no more than the optimal solution and through
the first distinct cost beyond it.  From the counts it derives the optimal
cost, the number of nodes at or below it, the cost gaps and the quantities
appearing in the expansion bounds of Zoomer and ZigZagZoomer.

The enumeration keeps every generated node in memory; it is a test fixture,
not a search algorithm.
"""
from __future__ import annotations

import bisect
import csv
import heapq
import itertools
import math
from dataclasses import dataclass

from .core import INF, Domain, SearchError

DEFAULT_NODE_CAP = 5_000_000
_EPS = 2.0**-40


class OracleCapExceeded(SearchError):
    """The instance is too large for exhaustive enumeration."""


class HorizonError(ValueError):
    """Query beyond the range of enumerated costs."""


@dataclass(frozen=True)
class OracleProfile:
    distinct_values: tuple
    cumulative_counts: tuple
    theta_star: float
    n_star: int
    delta_min: float
    delta_star: float
    theta0: float

    @property
    def n0(self) -> int:
        """Nodes costing no more than the root: the first call's expansions."""
        return self.cumulative_counts[0]

    @property
    def horizon(self) -> float:
        return self.distinct_values[-1]


def profile(domain: Domain, node_cap: int = DEFAULT_NODE_CAP) -> OracleProfile:
    """Enumerate ``domain`` best-first and summarize its cost structure.

    Raises :class:`OracleCapExceeded` when more than ``node_cap`` nodes would
    have to be popped, and :class:`SearchError` when the tree is finite and
    holds no goal.
    """
    tie = itertools.count()
    root = domain.root
    heap = [(root.f, next(tie), root)]
    values, counts = [], []
    popped = 0
    theta_star = None
    stop_at = None  # cost of the first distinct value beyond theta_star
    while heap:
        f = heap[0][0]
        if theta_star is not None and f > theta_star:
            if stop_at is None:
                stop_at = f
            elif f > stop_at:
                break
        _, _, node = heapq.heappop(heap)
        popped += 1
        if popped > node_cap:
            raise OracleCapExceeded(f"more than {node_cap} nodes to enumerate")
        if values and values[-1] == f:
            counts[-1] += 1
        else:
            values.append(f)
            counts.append((counts[-1] if counts else 0) + 1)
        if theta_star is None and domain.is_goal(node):
            theta_star = f
        for c in domain.children(node):
            heapq.heappush(heap, (c.f, next(tie), c))
    if theta_star is None:
        raise SearchError("tree exhausted without reaching a goal")

    i_star = values.index(theta_star)
    delta_star = values[i_star + 1] - theta_star if i_star + 1 < len(values) else INF
    gaps = [values[i + 1] - values[i] for i in range(min(i_star + 1, len(values) - 1))]
    delta_min = min(gaps) if gaps else INF
    return OracleProfile(tuple(values), tuple(counts), theta_star, counts[i_star],
                         delta_min, delta_star, root.f)


def optimal_cost(domain: Domain, state_cap: int = DEFAULT_NODE_CAP) -> float:
    """Optimal solution cost by best-first search over distinct states.

    Each state is closed the first time it is popped.  This is exact when
    ``node.state`` identifies the problem state and costs are nondecreasing
    along every path, since then the cheapest path to a state is popped
    first.  Much cheaper than :func:`profile` on domains whose tree revisits
    few states many times (sliding tiles, pancakes).
    """
    tie = itertools.count()
    root = domain.root
    heap = [(root.f, next(tie), root)]
    closed = set()
    while heap:
        f, _, node = heapq.heappop(heap)
        if node.state in closed:
            continue
        if domain.is_goal(node):
            return f
        closed.add(node.state)
        if len(closed) > state_cap:
            raise OracleCapExceeded(f"more than {state_cap} states to close")
        for c in domain.children(node):
            if c.state not in closed:
                heapq.heappush(heap, (c.f, next(tie), c))
    raise SearchError("state space exhausted without reaching a goal")


def n_of_theta(prof: OracleProfile, theta: float) -> int:
    """Number of nodes costing at most ``theta``."""
    if theta > prof.horizon:
        raise HorizonError(f"theta={theta} beyond enumerated costs (max {prof.horizon})")
    i = bisect.bisect_right(prof.distinct_values, theta)
    return prof.cumulative_counts[i - 1] if i else 0


def theta_exceed(prof: OracleProfile, budget: int) -> float:
    """Smallest cost ``v`` with more than ``budget`` nodes costing at most ``v``."""
    i = bisect.bisect_right(prof.cumulative_counts, budget)
    if i == len(prof.cumulative_counts):
        raise HorizonError(f"no enumerated cost exceeds budget {budget}")
    return prof.distinct_values[i]


def ceil_log2(x: float) -> int:
    """``ceil(log2(x))`` with a small relative guard against rounding noise."""
    y = math.log2(x)
    return math.ceil(y - _EPS * max(1.0, abs(y)))


def bound_omega(prof: OracleProfile) -> tuple:
    """The two logarithmic factors of the Zoomer and ZigZagZoomer bounds.

    An infinite gap (nothing costs more than the optimum) contributes 0.
    """
    head = ceil_log2(prof.theta_star / prof.theta0)
    tail1 = 0 if math.isinf(prof.delta_min) else ceil_log2(prof.theta_star / prof.delta_min)
    tail2 = 0 if math.isinf(prof.delta_star) else max(0, ceil_log2(prof.theta_star / (2 * prof.delta_star)))
    return head + tail1, head + tail2


def zoomer_bound(prof: OracleProfile) -> int:
    """Maximum number of expansions Zoomer may spend on this instance."""
    w1, _ = bound_omega(prof)
    return max(1, 4 * w1) * prof.n_star


def zzz_bound(prof: OracleProfile, n0: int | None = None) -> float:
    """Maximum number of expansions of the simple ZigZagZoomer."""
    n0 = prof.n0 if n0 is None else n0
    _, w2 = bound_omega(prof)
    if w2 < 1:
        return float(max(n0, prof.n_star))
    return n0 + 2 * (4 + ceil_log2(prof.n_star / n0) + math.log2(w2)) * w2 * prof.n_star


def export_csv(prof: OracleProfile, fh) -> None:
    """Write ``value,cumulative_count`` rows to an open text file."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["value", "cumulative_count"])
    for v, c in zip(prof.distinct_values, prof.cumulative_counts):
        w.writerow([repr(v), c])


def bracket_violations(trace, prof: OracleProfile) -> list:
    """Calls whose recorded bracket is unsound for this instance.

    For solvers that keep a shared ``(lower, upper, up_min)`` bracket, every
    call must satisfy ``lower < theta <= upper`` and a finite ``upper`` must
    be the cost of some node of the tree.  Returns ``(index, reason)`` pairs.
    """
    values = set(prof.distinct_values)
    bad = []
    for i, rec in enumerate(trace.calls):
        if rec.bracket is None or rec.bracket[2] is None:
            continue  # per-program brackets (simple ZigZagZoomer) hold thresholds, not costs
        lower, upper, _ = rec.bracket
        if not lower < rec.theta <= upper:
            bad.append((i, f"theta={rec.theta} outside ({lower}, {upper}]"))
        elif not math.isinf(upper) and upper <= prof.horizon and upper not in values:
            bad.append((i, f"upper={upper} is not the cost of any node"))
    return bad
