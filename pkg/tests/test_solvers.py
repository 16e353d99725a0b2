import pytest

from conftest import small_instances
from lmsearch import domains as D
from lmsearch import oracle
from lmsearch.core import CapExceeded, NoSolutionError, Result, scale_costs
from lmsearch.sched import block_program
from lmsearch.solvers import (
    ALGORITHMS,
    _zoomer,
    eda_star,
    ida_cr,
    ida_star,
    next_cr_threshold,
    solve,
    zoomer,
    zzz_optimized,
    zzz_simple,
)

ZOOMERS = [zoomer, zzz_simple, zzz_optimized]


def two_value_tree():
    # root f1 -> a f3 -> three leaves f5; the first leaf has a goal child f7
    f = [1, 3, 5, 5, 5, 7]
    children = [[1], [2, 3, 4], [5], [], [], []]
    return D.TreeDomain(f, children, goals=[5])


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_goal_at_root(name):
    rep = solve(name, D.Chain(0))
    assert rep.solution_cost == 1 and rep.expansions == 0
    assert len(rep.trace.calls) == 1


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_optimal_on_small_instances(name):
    for dom in small_instances():
        theta_star = oracle.profile(dom).theta_star
        try:
            rep = solve(name, dom, cap=10**6)
        except CapExceeded:
            continue  # EDA* and IDA*_CR blow up on Coconut by design
        assert rep.solution_cost == theta_star, dom
        assert rep.expansions == sum(c.n_used for c in rep.trace.calls)


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_random_costs_root_at_zero(name):
    for s in range(3):
        dom = D.gen_tiles(s, random_costs=True, moves=3)
        assert dom.root.f == 0
        rep = solve(name, dom, cap=10**7)
        assert rep.solution_cost == oracle.optimal_cost(dom)
        assert rep.shift == 1.0


@pytest.mark.parametrize("d", [1, 2, 3, 10])
def test_ida_star_chain_closed_form(d):
    rep = ida_star(D.Chain(d))
    assert rep.expansions == d * (d + 1) // 2 + d
    assert len(rep.trace.calls) == d + 1
    assert rep.solution_cost == d + 1


def test_ida_star_binary_tree(binary3):
    rep = ida_star(binary3)
    prof = oracle.profile(binary3)
    per_call = [c.n_used for c in rep.trace.calls]
    assert per_call[:3] == [1, 3, 7]
    # the final call expands every node within theta* except the goal itself
    assert per_call[3] == prof.n_star - 1
    assert rep.expansions == 1 + 3 + 7 + 14


def test_eda_star_chain(chain9):
    rep = eda_star(chain9, gamma=2)
    assert [c.theta for c in rep.trace.calls] == [1, 2, 4, 8, 16]
    # the goal is reached but not expanded: nodes f=1..9
    assert rep.trace.calls[-1].n_used == 9
    assert rep.solution_cost == 10


def test_eda_star_coconut_last_threshold():
    dom = D.gen_coconut(0, D=2690, q=6)
    with pytest.raises(CapExceeded) as info:
        eda_star(dom, cap=10**7)
    last = info.value.trace.calls[-1]
    assert last.theta / dom.cost_unit == 4096
    assert last.result is Result.BUDGET_EXCEEDED


def test_eda_star_starting_exponent():
    dom = D.TreeDomain([5, 6, 9], [[1], [2], []], goals=[2])
    rep = eda_star(dom, gamma=2)
    assert [c.theta for c in rep.trace.calls] == [8, 16]


def test_ida_cr_degenerates_to_ida_on_binary_tree():
    dom = D.complete_tree(2, 6, goal=(1, 1, 1, 1, 1))
    rep = ida_cr(dom, b=2)
    assert [c.theta for c in rep.trace.calls] == [1, 2, 3, 4, 5, 6]


def test_next_cr_threshold():
    assert next_cr_threshold({3.0: 2, 5.0: 4, 9.0: 1}, 5) == 5.0
    assert next_cr_threshold({3.0: 2, 5.0: 4, 9.0: 1}, 2) == 3.0
    assert next_cr_threshold({3.0: 2, 5.0: 4}, 100) == 5.0


def test_ida_cr_coconut_jumps_in_threshold():
    dom = D.gen_coconut(0, D=2690, q=6)
    with pytest.raises(CapExceeded) as info:
        ida_cr(dom, cap=2 * 10**6)
    top = max(c.theta for c in info.value.trace.calls)
    assert top / dom.cost_unit >= 2 * 2689


def test_argument_validation(chain9):
    with pytest.raises(ValueError):
        ida_cr(chain9, b=1)
    with pytest.raises(ValueError):
        eda_star(chain9, gamma=1)
    with pytest.raises(ValueError):
        solve("nope", chain9)


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_no_goal_raises(name):
    with pytest.raises(NoSolutionError):
        solve(name, D.complete_tree(2, 3))


def test_cap_carries_partial_trace():
    with pytest.raises(CapExceeded) as info:
        ida_star(D.Chain(1000), cap=5000)
    tr = info.value.trace
    assert tr.total_expansions == 5000 == sum(c.n_used for c in tr.calls)


def test_zoomer_chain_bound(chain9):
    rep = zoomer(chain9)
    prof = oracle.profile(chain9)
    assert rep.solution_cost == 10
    assert rep.expansions <= oracle.zoomer_bound(prof) == 320


def test_zoomer_sets_upper_to_theta_minus():
    dom = two_value_tree()
    rep = zoomer(dom)
    assert rep.solution_cost == 7
    calls = rep.trace.calls
    exceeded = [i for i, c in enumerate(calls) if c.result is Result.BUDGET_EXCEEDED]
    assert exceeded
    for i in exceeded:
        c = calls[i]
        assert c.theta_minus < c.theta
        nxt = calls[i + 1] if i + 1 < len(calls) else None
        if nxt is not None and nxt.k == c.k:
            assert nxt.bracket[1] == c.theta_minus


def test_mutant_breaks_bracket_soundness():
    dom = two_value_tree()
    prof = oracle.profile(dom)
    good = zoomer(dom)
    bad = _zoomer(dom, tighten_upper=False)
    assert good.solution_cost == bad.solution_cost == 7
    assert oracle.bracket_violations(good.trace, prof) == []
    assert oracle.bracket_violations(bad.trace, prof)
    # on a benign instance the mutant still respects the expansion bound
    chain = D.Chain(9)
    assert _zoomer(chain, tighten_upper=False).expansions <= oracle.zoomer_bound(oracle.profile(chain))


def test_zoomer_bracket_tracks_theta_k():
    for dom in small_instances() + [two_value_tree()]:
        prof = oracle.profile(dom)
        rep = zoomer(dom)
        n0 = rep.trace.calls[0].n_used
        assert oracle.bracket_violations(rep.trace, prof) == []
        for c in rep.trace.calls[1:]:
            try:
                theta_k = oracle.theta_exceed(prof, n0 * 2**c.k)
            except oracle.HorizonError:
                continue
            lower, upper, _ = c.bracket
            assert lower < theta_k
            assert upper >= theta_k


def test_zoomer_calls_per_iteration():
    for dom in small_instances():
        prof = oracle.profile(dom)
        rep = zoomer(dom)
        head = oracle.ceil_log2(prof.theta_star / prof.theta0)
        tail = 0 if prof.delta_min == float("inf") else oracle.ceil_log2(prof.theta_star / prof.delta_min)
        ks = {c.k for c in rep.trace.calls[1:]}
        for k in ks:
            steps = [c.step for c in rep.trace.calls[1:] if c.k == k]
            assert steps.count("double") <= max(head, 1)
            assert steps.count("half") <= tail


def test_zzz_simple_chain(chain9):
    rep = zzz_simple(chain9)
    prof = oracle.profile(chain9)
    assert rep.solution_cost == 10
    assert rep.expansions <= oracle.zzz_bound(prof)
    blocks = [(c.j, c.k) for c in rep.trace.calls[1:9]]
    assert blocks == [(1, 0), (2, 1), (3, 0), (4, 2), (5, 0), (6, 1), (7, 0), (8, 3)]


def test_zzz_simple_upper_is_theta():
    rep = zzz_simple(D.Chain(40))
    seen = {}
    for c in rep.trace.calls[1:]:
        if c.k in seen:
            prev = seen[c.k]
            if prev.result is Result.BUDGET_EXCEEDED:
                assert c.bracket[1] == prev.theta
        seen[c.k] = c


def test_zzz_optimized_chain(chain9):
    rep = zzz_optimized(chain9)
    assert rep.solution_cost == 10
    simple = zzz_simple(chain9)
    assert rep.expansions <= simple.expansions


def test_zzz_optimized_skips_advance_kmin():
    rep = zzz_optimized(D.Chain(300))
    assert rep.trace.skips
    calls = rep.trace.calls[1:]
    for j_skip, k, kmin in rep.trace.skips:
        assert kmin == k + 1
        later = [c.j for c in calls if c.j > j_skip]
        assert all(j % (1 << kmin) == 0 for j in later)
        assert all(block_program(j) >= kmin for j in later)


@pytest.mark.parametrize("solver", ZOOMERS)
@pytest.mark.parametrize("lam", [2, 4])
def test_scale_equivariance(solver, lam):
    for dom in [D.Chain(37), D.gen_coconut(3, max_D=40, max_q=4), D.gen_tiles(2, moves=14)]:
        base = solver(dom)
        scaled = solver(scale_costs(dom, lam))
        assert [c.n_used for c in scaled.trace.calls] == [c.n_used for c in base.trace.calls]
        assert scaled.solution_cost == lam * base.solution_cost
