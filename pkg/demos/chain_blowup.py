"""Why re-searching with the next cost threshold is quadratic on a chain.

A chain of d nodes has a new cost on every level, so IDA* raises its threshold
by one node per iteration and re-expands the whole prefix each time.  Zoomer
doubles a node budget instead and bisects the threshold under that budget.

    python demos/chain_blowup.py
"""
from lmsearch import domains, oracle
from lmsearch.solvers import solve


def main():
    print(f"{'d':>6} {'N*':>6} {'ida_star':>10} {'/N*^2':>6} {'zoomer':>8} {'bound':>9} {'zzz_opt':>8}")
    for d in (10, 100, 1000, 10000):
        dom = domains.Chain(d)
        prof = oracle.profile(dom)
        ida = solve("ida_star", dom).expansions
        zoom = solve("zoomer", dom).expansions
        zzz = solve("zzz_optimized", dom).expansions
        print(f"{d:>6} {prof.n_star:>6} {ida:>10} {ida / prof.n_star**2:>6.3f} "
              f"{zoom:>8} {oracle.zoomer_bound(prof):>9} {zzz:>8}")


if __name__ == "__main__":
    main()
