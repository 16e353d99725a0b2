"""Watch Zoomer bracket the optimal cost on a small sliding-tile puzzle.

Every line is one budgeted deepening call: the iteration k, how the threshold
was chosen, the bracket before the call and what came back.

    python demos/zoomer_trace.py [seed]
"""
import sys

from lmsearch import domains, oracle
from lmsearch.core import UNLIMITED
from lmsearch.solvers import zoomer


def main(seed=3):
    dom = domains.gen_tiles(seed, moves=20)
    prof = oracle.profile(dom)
    rep = zoomer(dom)
    print(f"{dom.spec_line}\noptimal {prof.theta_star}, N* {prof.n_star}, "
          f"bound {oracle.zoomer_bound(prof)}, used {rep.expansions}")
    for rec in rep.trace.calls:
        lo, hi, up_min = rec.bracket or (None, None, None)
        budget = "none" if rec.budget == UNLIMITED else rec.budget
        print(f"  k={rec.k} {rec.step:<6} theta={rec.theta:<7g} budget={budget:<8} "
              f"[{lo}, {hi}] up_min={up_min}  -> {rec.result.value} n={rec.n_used}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))
