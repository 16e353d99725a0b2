"""Interleaving programs whose running times are unknown.

Program k needs tau_k steps.  The doubling schedule hands program
log2(A6519(j)) a block of 2**k steps in block j; the budgeted schedule always
extends the cheapest pending segment of T(k, n) = n * 2**k.

    python demos/schedulers.py
"""
from lmsearch import sched


def main():
    print("block j :", " ".join(f"{j:>2}" for j in range(1, 17)))
    print("A6519(j):", " ".join(f"{sched.a6519(j):>2}" for j in range(1, 17)))

    taus = [None, None, 40, 9]  # programs 0 and 1 never finish, program 3 solves
    res = sched.uds_run(lambda k: sched.FixedRuntime(taus[k] if k < len(taus) else None,
                                                     solves=k == 3))
    print(f"\nUDS: program {res.program} solved after {res.total_steps} steps "
          f"(bound {sched.uds_bound(3, 9)})")
    for j, k, used in res.log:
        print(f"  block {j:>2}: program {k} ran {used} steps")

    taus = {1: None, 2: 50, 3: 20}
    res = sched.ubs_run(lambda k: sched.FixedRuntime(taus.get(k), solves=k == 3),
                        sched.doubling_table)
    n = sched.segments_needed(sched.doubling_table, 3, 20)
    print(f"\nUBS: program {res.program} solved after {res.total_steps} steps "
          f"(theorem bound {sched.ubs_theorem_bound(sched.doubling_table, taus, 3, n)}, "
          f"corollary {sched.ubs_corollary_bound(sched.doubling_table, 3, n)})")
    for key, k, n, used in res.log:
        print(f"  T={key:>3}: program {k} segment {n} ran {used} steps")


if __name__ == "__main__":
    main()
