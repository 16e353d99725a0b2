"""Coconut: a tree where overshooting the optimal cost is ruinous.

Three trunks of height D rise in unit steps, and from every trunk node a
jump of cost 2D leads to another trunk.  On top of each trunk grows a
ternary tree of 0.1-cost steps; the goal lies q levels down in one of them.
Any threshold a little above the optimum lets the search flood those trees.
Doubling thresholds (EDA*) overshoots by up to a factor two, and the fringe
counts seen by IDA*_CR push it past the optimum too.  Both run out of budget
while IDA* and the budgeted searches finish.

    python demos/coconut.py [D]
"""
import sys
import time

from lmsearch import domains
from lmsearch.core import CapExceeded
from lmsearch.solvers import ALGORITHMS, solve

CAP = 10**7


def main(D=2690):
    dom = domains.parse_instance(f"domain:coconut;seed:0;params:b=3,D={D},q=6")
    print(f"{dom.spec_line}  optimal cost {dom.goal_cost / dom.cost_unit}")
    for name in ALGORITHMS:
        t0 = time.perf_counter()
        try:
            rep = solve(name, dom, cap=CAP if name != "ida_star" else 10**8)
            what = f"cost {rep.solution_cost / dom.cost_unit:.1f}"
            used = rep.expansions
        except CapExceeded as exc:
            what, used = "capped", exc.trace.total_expansions
        print(f"  {name:<14} {used:>10} expansions  {what:<12} {time.perf_counter() - t0:5.1f} s")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))
