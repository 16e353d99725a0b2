"""Compiled depth-first search for domains with integer-encoded states.

The step functions of a domain are numba-jitted ``n_children(state, params)``,
``child(state, i, params) -> (state, cost_delta)`` and
``is_goal(state, params)``.  They are passed as first-class functions, so one
search routine serves every domain.  :func:`specialize` binds them once per
domain type: typing function arguments on every call from Python costs more
than a small search.
"""
import numpy as np
from numba import njit, types
from numba.typed import Dict

STATUS_NONE = 0
STATUS_SOLUTION = 1
STATUS_BUDGET = 2
STATUS_OVERFLOW = 3

MAX_BUDGET = 2**63 - 1
MAX_FRINGE_VALUES = 100_000


class Workspace:
    """Reusable explicit stack; grows by doubling when a search overflows it."""

    def __init__(self, capacity=256):
        self.allocate(capacity)

    def allocate(self, capacity):
        self.capacity = int(capacity)
        self.states = np.empty(self.capacity, np.int64)
        self.fs = np.empty(self.capacity, np.float64)
        self.next_child = np.empty(self.capacity, np.int64)
        self.n_child = np.empty(self.capacity, np.int64)


@njit(cache=True)
def _record_fringe(fringe, v, top_key):
    if v in fringe:
        fringe[v] += 1
    elif len(fringe) < MAX_FRINGE_VALUES:
        fringe[v] = 1
        if v > top_key:
            top_key = v
    elif v > top_key:
        # full: the largest bucket absorbs the newcomer and takes its value
        fringe[v] = fringe.pop(top_key) + 1
        top_key = v
    else:
        fringe[top_key] += 1
    return top_key


@njit
def deepen(n_children, child, is_goal, params, root_state, root_f, scale,
           theta, budget, states, fs, next_child, n_child, fringe, collect):
    cap = states.shape[0]
    used = 0
    lo = -np.inf
    hi = np.inf
    found = False
    best_state = root_state
    best_f = np.inf
    best_depth = 0
    top_key = -np.inf

    top = -1
    cand_state = root_state
    cand_f = root_f
    pending = True
    while True:
        if pending:
            pending = False
            c = cand_f
            if c > theta:
                if c < hi:
                    hi = c
                if collect:
                    top_key = _record_fringe(fringe, c, top_key)
            else:
                if c > lo:
                    lo = c
                if is_goal(cand_state, params):
                    if not found or c < best_f:
                        found = True
                        best_state = cand_state
                        best_f = c
                        best_depth = top + 1
                        theta = c
                elif used == budget:
                    return STATUS_BUDGET, used, lo, hi, best_state, best_f, best_depth
                else:
                    top += 1
                    if top == cap:
                        return STATUS_OVERFLOW, used, lo, hi, best_state, best_f, best_depth
                    used += 1
                    states[top] = cand_state
                    fs[top] = c
                    next_child[top] = 0
                    n_child[top] = n_children(cand_state, params)
        if top < 0:
            break
        i = next_child[top]
        if i < n_child[top]:
            next_child[top] = i + 1
            s, delta = child(states[top], i, params)
            cand_state = s
            cand_f = fs[top] + scale * delta
            pending = True
        else:
            top -= 1
    status = STATUS_SOLUTION if found else STATUS_NONE
    return status, used, lo, hi, best_state, best_f, best_depth


_SPECIALIZED = {}


def specialize(n_children, child, is_goal):
    """``deepen`` with the step functions bound; memoized per triple.

    Returns ``(search, search_fringe)``.  Both build their fringe dict inside
    compiled code; only ``search_fringe`` hands it back, since moving a typed
    dict across the Python boundary costs more than a small search.

    Neither wrapper nor ``deepen`` is cached on disk: their signatures hold
    dispatcher types, which numba cannot pickle reliably.  The first call per
    domain type in a process compiles for about half a second.
    """
    key = (n_children, child, is_goal)
    pair = _SPECIALIZED.get(key)
    if pair is None:
        @njit
        def search(params, root_state, root_f, scale, theta, budget, states, fs,
                   next_child, n_child):
            fringe = Dict.empty(key_type=types.float64, value_type=types.int64)
            return deepen(n_children, child, is_goal, params, root_state, root_f, scale,
                          theta, budget, states, fs, next_child, n_child, fringe, False)

        @njit
        def search_fringe(params, root_state, root_f, scale, theta, budget, states, fs,
                          next_child, n_child):
            fringe = Dict.empty(key_type=types.float64, value_type=types.int64)
            out = deepen(n_children, child, is_goal, params, root_state, root_f, scale,
                         theta, budget, states, fs, next_child, n_child, fringe, True)
            return out, fringe

        pair = _SPECIALIZED[key] = (search, search_fringe)
    return pair
