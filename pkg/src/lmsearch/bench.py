"""Command line harness: generate instances, run the solver matrix, verify bounds.

    python -m lmsearch gen coconut 100 --seed 7 --trunks 3 -o coconut.txt
    python -m lmsearch run coconut.txt --algorithms ida_star,zoomer -o out.csv
    python -m lmsearch verify coconut.txt

Exit codes: 0 ok, 1 a bound or soundness check failed, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import oracle, sched
from .core import CapExceeded, Result, SearchError
from .dfs import deepening
from .domains import GENERATORS, format_instance, instance_seeds, parse_instance
from .solvers import ALGORITHMS, DEFAULT_CAP, solve

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

CSV_FIELDS = ["domain_id", "algorithm", "expansions", "solution_cost", "optimal",
              "capped", "bound_value", "within_bound", "wall_nanos"]
DEEPENING_OPT = "deepening_opt"
DEFAULT_ORACLE_CAP = 200_000
SCHED_CHECK_J = 1 << 20


class UsageError(Exception):
    pass


@dataclass
class RunRecord:
    domain_id: str
    algorithm: str
    expansions: int
    solution_cost: Optional[float]
    optimal: Optional[bool]
    capped: bool
    bound_value: Optional[float]
    within_bound: Optional[bool]
    wall_nanos: int

    def row(self, cost_unit: float = 1.0) -> list:
        return [
            self.domain_id,
            self.algorithm,
            self.expansions,
            "" if self.solution_cost is None else f"{self.solution_cost / cost_unit:.1f}",
            _flag(self.optimal),
            _flag(self.capped),
            "" if self.bound_value is None else f"{self.bound_value:.1f}",
            _flag(self.within_bound),
            self.wall_nanos,
        ]


def _flag(x):
    return "" if x is None else str(bool(x)).lower()


@dataclass
class Oracle:
    theta_star: Optional[float] = None
    prof: Optional[oracle.OracleProfile] = None


def consult_oracle(domain, cap: int) -> Oracle:
    """Tree profile when it fits under ``cap``, else just the optimal cost."""
    try:
        prof = oracle.profile(domain, node_cap=cap)
        return Oracle(prof.theta_star, prof)
    except oracle.OracleCapExceeded:
        pass
    try:
        return Oracle(oracle.optimal_cost(domain, state_cap=cap))
    except oracle.OracleCapExceeded:
        return Oracle()


def theorem_bound(algorithm: str, prof) -> Optional[float]:
    if prof is None:
        return None
    if algorithm == "zoomer":
        return float(oracle.zoomer_bound(prof))
    if algorithm == "zzz_simple":
        return float(oracle.zzz_bound(prof))
    return None


def run_one(domain, algorithm: str, cap: int, orc: Oracle) -> RunRecord:
    t0 = time.perf_counter_ns()
    cost = None
    capped = False
    if algorithm == DEEPENING_OPT:
        if orc.theta_star is None:
            raise UsageError(f"{DEEPENING_OPT} needs an oracle cost for {domain.spec_line}")
        out = deepening(domain, theta=orc.theta_star, budget=cap)
        expansions = out.n_used
        capped = out.result is Result.BUDGET_EXCEEDED
        if out.result is Result.SOLUTION:
            cost = out.solution.f
    else:
        try:
            rep = solve(algorithm, domain, cap=cap)
            expansions, cost = rep.expansions, rep.solution_cost
        except CapExceeded as exc:
            expansions, capped = exc.trace.total_expansions, True
    wall = time.perf_counter_ns() - t0
    optimal = None if orc.theta_star is None else (cost is not None and cost == orc.theta_star)
    bound = theorem_bound(algorithm, orc.prof)
    within = None
    if orc.prof is not None:
        within = not capped if bound is None else (not capped and expansions <= bound)
    return RunRecord(domain.spec_line, algorithm, expansions, cost, optimal, capped,
                     bound, within, wall)


def read_instances(path: str) -> list:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return [parse_instance(ln) for ln in lines]
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def parse_algorithms(text: str) -> list:
    names = [a.strip() for a in text.split(",") if a.strip()]
    for a in names:
        if a not in ALGORITHMS and a != DEEPENING_OPT:
            raise UsageError(f"unknown algorithm {a!r}")
    return names


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def parse_overrides(pairs) -> dict:
    out = {}
    for p in pairs or ():
        k, sep, v = p.partition("=")
        if not sep:
            raise UsageError(f"--set expects KEY=VALUE, got {p!r}")
        try:
            out[k] = int(v)
        except ValueError:
            raise UsageError(f"--set value must be an integer: {p!r}") from None
    return out


def cmd_gen(args) -> int:
    if args.domain not in GENERATORS:
        raise UsageError(f"unknown domain {args.domain!r}; choose from {sorted(GENERATORS)}")
    kwargs = parse_overrides(args.set)
    if args.domain == "coconut":
        kwargs.setdefault("b", args.trunks)
    if args.random_costs:
        if args.domain not in ("tiles", "pancake"):
            raise UsageError("--random-costs applies to tiles and pancake")
        kwargs["random_costs"] = True
    fh, close = _open_out(args.output)
    try:
        for s in instance_seeds(args.seed, args.count):
            try:
                dom = GENERATORS[args.domain](s, **kwargs)
            except TypeError as exc:
                raise UsageError(str(exc)) from exc
            fh.write(dom.spec_line + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_run(args) -> int:
    domains = read_instances(args.instances)
    algorithms = parse_algorithms(args.algorithms)
    fh, close = _open_out(args.output)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for dom in domains:
            orc = consult_oracle(dom, args.oracle_cap) if args.oracle_cap > 0 else Oracle()
            for a in algorithms:
                if a == DEEPENING_OPT and orc.theta_star is None:
                    print(f"warning: no oracle cost, skipping {a} on {dom.spec_line}", file=sys.stderr)
                    continue
                w.writerow(run_one(dom, a, args.cap, orc).row(dom.cost_unit))
            fh.flush()
    finally:
        if close:
            fh.close()
    return EXIT_OK


def scheduler_checks() -> list:
    """Scheduler lemma and bound checks; returns the names of failed checks."""
    failed = []
    if not sched.verify_sched_index(SCHED_CHECK_J):
        failed.append("sched_index")
    if not sched.verify_partial_sums(SCHED_CHECK_J):
        failed.append("partial_sums")
    taus = [None, None, None, 11]
    res = sched.uds_run(lambda k: sched.FixedRuntime(taus[k] if k < len(taus) else None))
    if not (res.solved and res.total_steps <= sched.uds_bound(3, 11)):
        failed.append("uds_bound")
    res = sched.ubs_run(lambda k: sched.FixedRuntime(16 if k == 3 else None), sched.doubling_table)
    if not (res.solved and res.total_steps <= sched.ubs_corollary_bound(sched.doubling_table, 3, 2)):
        failed.append("ubs_corollary")
    return failed


def cmd_verify(args) -> int:
    domains = read_instances(args.instances)
    violations = 0
    for dom in domains:
        try:
            prof = oracle.profile(dom, node_cap=args.oracle_cap)
        except oracle.OracleCapExceeded:
            print(f"warning: {dom.spec_line} exceeds the oracle cap, skipped", file=sys.stderr)
            continue
        except SearchError as exc:
            print(f"warning: {dom.spec_line}: {exc}, skipped", file=sys.stderr)
            continue
        for name, bound in (("zoomer", oracle.zoomer_bound(prof)),
                            ("zzz_simple", oracle.zzz_bound(prof))):
            try:
                rep = solve(name, dom, cap=args.cap)
            except CapExceeded as exc:
                print(f"FAIL {dom.spec_line} {name}: capped at {exc.cap}")
                violations += 1
                continue
            ok = rep.expansions <= bound and rep.solution_cost == prof.theta_star
            margin = bound / rep.expansions if rep.expansions else float("inf")
            print(f"{'ok  ' if ok else 'FAIL'} {dom.spec_line} {name}: "
                  f"{rep.expansions} <= {bound:.1f} (margin x{margin:.2f})")
            violations += not ok
            if name == "zoomer":
                bad = oracle.bracket_violations(rep.trace, prof)
                for i, why in bad:
                    print(f"FAIL {dom.spec_line} zoomer call {i}: {why}")
                violations += len(bad)
    failed = scheduler_checks()
    for name in failed:
        print(f"FAIL scheduler check {name}")
    print(f"scheduler checks: {'ok' if not failed else 'FAIL'}")
    violations += len(failed)
    return EXIT_VIOLATION if violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lmsearch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write canonical instance lines")
    g.add_argument("domain", help="chain, coconut, tiles or pancake")
    g.add_argument("count", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--trunks", type=int, default=3, help="Coconut branching factor")
    g.add_argument("--random-costs", action="store_true")
    g.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="force a generator parameter, e.g. --set D=2690")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run solvers and write CSV")
    r.add_argument("instances")
    r.add_argument("--algorithms", default=",".join([*ALGORITHMS, DEEPENING_OPT]))
    r.add_argument("--cap", type=int, default=DEFAULT_CAP)
    r.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    r.add_argument("--seed", type=int, default=0, help="accepted for symmetry; runs are deterministic")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check expansion bounds against the oracle")
    v.add_argument("instances")
    v.add_argument("--cap", type=int, default=DEFAULT_CAP)
    v.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

