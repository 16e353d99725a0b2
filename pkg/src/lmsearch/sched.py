"""Dovetailing schedulers for programs with unknown running times.

A program is any object with a ``step(allowance)`` method that runs for at
most ``allowance`` steps and returns ``(steps_consumed, status)``.  Programs
keep their own state between calls, so schedulers can suspend and resume
them without threads.

Two schedulers are provided.  :func:`uds_run` runs program ``k`` in blocks of
``2**k`` steps, picking the program for block ``j`` from the ruler sequence
:func:`a6519`.  :func:`ubs_run` runs programs in segments priced by a cost
table ``T(k, n)`` and always extends the cheapest pending segment.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np


class Status(str, Enum):
    RUNNING = "running"
    HALTED = "halted"
    SOLUTION = "solution"


def a6519(j: int) -> int:
    """Largest power of two dividing ``j``."""
    if j < 1:
        raise ValueError("j must be a positive integer")
    return ((j ^ (j - 1)) + 1) >> 1


def block_program(j: int) -> int:
    """Index of the program run in block ``j``."""
    return a6519(j).bit_length() - 1


def blocks_given(j: int, k: int) -> int:
    """Blocks that program ``k`` has received after blocks ``1..j``."""
    return ((j >> k) + 1) >> 1


@dataclass
class ProgramSlot:
    k: int
    program: object
    steps_run: int = 0
    segments: int = 0
    halted: bool = False
    produced_solution: bool = False

    def run(self, allowance: int) -> int:
        if self.halted:
            raise RuntimeError(f"program {self.k} already halted")
        used, status = self.program.step(allowance)
        if not 0 <= used <= allowance:
            raise ValueError(f"program {self.k} consumed {used} of {allowance} steps")
        self.steps_run += used
        self.segments += 1
        if status != Status.RUNNING:
            self.halted = True
            self.produced_solution = status == Status.SOLUTION
        return used


@dataclass
class ScheduleResult:
    solved: bool
    program: Optional[int]  # index of the program that produced the solution
    total_steps: int
    slots: list
    log: list = field(default_factory=list)  # (block or key, k, steps) per run

    @property
    def solution(self):
        if not self.solved:
            return None
        return next(s.program for s in self.slots if s is not None and s.k == self.program)


def uds_run(make_program: Callable[[int], object], max_blocks: int = 10**7) -> ScheduleResult:
    """Uniform doubling schedule: block ``j`` gives program ``log2 a6519(j)`` ``2**k`` steps.

    Programs are created on first touch with ``make_program(k)``.  Halted
    programs keep their blocks but consume nothing.  Stops after
    ``max_blocks`` blocks without a solution.
    """
    slots = []
    total = 0
    log = []
    for j in range(1, max_blocks + 1):
        k = block_program(j)
        while k >= len(slots):
            slots.append(ProgramSlot(len(slots), make_program(len(slots))))
        slot = slots[k]
        if slot.halted:
            continue
        used = slot.run(1 << k)
        total += used
        log.append((j, k, used))
        if slot.produced_solution:
            return ScheduleResult(True, k, total, slots, log)
    return ScheduleResult(False, None, total, slots, log)


def ubs_run(make_program: Callable[[int], object], T: Callable[[int, int], int],
            max_extractions: int = 10**7) -> ScheduleResult:
    """Uniform budgeted schedule over programs ``k = 1, 2, ...``.

    Pending segments ``(k, n)`` sit in a priority queue keyed by ``T(k, n)``
    (ties go to smaller ``k``, then smaller ``n``).  Extracting ``(k, n)`` runs
    program ``k`` for ``T(k, n) - T(k, n - 1)`` steps.  The log records the
    extracted keys.  An empty queue means every program halted unsolved.
    """
    slots = {}
    total = 0
    log = []
    q = [(T(1, 1), 1, 1)]
    for _ in range(max_extractions):
        if not q:
            break
        key, k, n = heapq.heappop(q)
        if k not in slots:
            slots[k] = ProgramSlot(k, make_program(k))
        slot = slots[k]
        used = slot.run(key - T(k, n - 1))
        total += used
        log.append((key, k, n, used))
        if slot.produced_solution:
            return ScheduleResult(True, k, total, list(slots.values()), log)
        if not slot.halted:
            heapq.heappush(q, (T(k, n + 1), k, n + 1))
        if n == 1:
            heapq.heappush(q, (T(k + 1, 1), k + 1, 1))
    return ScheduleResult(False, None, total, list(slots.values()), log)


def check_cost_table(T: Callable[[int, int], int], k_max: int, n_max: int) -> bool:
    """Monotonicity required by :func:`ubs_run`, checked on a finite window."""
    if any(T(k, 0) != 0 for k in range(1, k_max + 1)):
        return False
    for k in range(1, k_max + 1):
        if any(T(k, n + 1) <= T(k, n) for n in range(n_max)):
            return False
    return all(T(k, 1) <= T(k + 1, 1) for k in range(1, k_max))


def doubling_table(k: int, n: int) -> int:
    """``T(k, n) = n * 2**k``."""
    return n << k


class FixedRuntime:
    """Synthetic program that halts after ``tau`` steps (never if ``tau`` is None)."""

    def __init__(self, tau: Optional[int], solves: bool = True):
        self.tau = tau
        self.solves = solves
        self.elapsed = 0

    def step(self, allowance):
        if self.tau is None:
            self.elapsed += allowance
            return allowance, Status.RUNNING
        used = min(allowance, self.tau - self.elapsed)
        self.elapsed += used
        if self.elapsed < self.tau:
            return used, Status.RUNNING
        return used, Status.SOLUTION if self.solves else Status.HALTED


def verify_sched_index(J: int) -> bool:
    """Exhaustively check the block structure of the ruler sequence up to ``J``.

    For every ``j <= J`` and ``k <= log2 J``: ``a6519(j) == 2**k`` exactly
    when ``j / 2**k`` is an odd integer, and program ``k`` owns
    ``floor((J / 2**k + 1) / 2)`` blocks.
    """
    if J < 1:
        raise ValueError("J must be a positive integer")
    j = np.arange(1, J + 1, dtype=np.int64)
    a = ((j ^ (j - 1)) + 1) >> 1
    if not all(a6519(int(x)) == int(y) for x, y in zip(j[:64], a[:64])):
        return False
    for k in range(J.bit_length()):
        p = 1 << k
        hit = a == p
        odd = (j % p == 0) & ((j // p) % 2 == 1)
        if not np.array_equal(hit, odd):
            return False
        # counted with exact rationals: floor((J/p + 1)/2) = floor((J + p) / (2p))
        if int(hit.sum()) != (J + p) // (2 * p):
            return False
    return True


def verify_partial_sums(J: int) -> bool:
    """Check ``sum_{i<=j} a6519(i) <= (j/2)(3 + floor(log2 j))`` for every ``j <= J``."""
    j = np.arange(1, J + 1, dtype=np.int64)
    s = np.cumsum(((j ^ (j - 1)) + 1) >> 1)
    floor_log = np.floor(np.log2(j)).astype(np.int64)
    # guard the float log against rounding near powers of two
    floor_log += (1 << (floor_log + 1)) <= j
    floor_log -= (1 << floor_log) > j
    return bool(np.all(2 * s <= j * (3 + floor_log)))


def uds_bound(k: int, tau: int) -> int:
    """Steps UDS may spend before program ``k`` halts after ``tau`` steps.

    ``(4 + k + floor(log2 n)) * n * 2**k`` with ``n = ceil(tau / 2**k)``.
    """
    n = max(1, -(-tau >> k))
    return (4 + k + n.bit_length() - 1) * n << k


def ubs_theorem_bound(T, taus: dict, k: int, n: int) -> int:
    """``sum_j min(tau_j, T_{k,n}(j))`` where ``T_{k,n}(j)`` is the largest ``T(j, m) <= T(k, n)``.

    ``taus`` maps program index to halting time (None for never).  Programs
    not listed never halt.
    """
    limit = T(k, n)
    total = 0
    j = 1
    while T(j, 1) <= limit:
        m = 1
        while T(j, m + 1) <= limit:
            m += 1
        reach = T(j, m)
        tau = taus.get(j)
        total += reach if tau is None else min(tau, reach)
        j += 1
    return total


def ubs_corollary_bound(T, k: int, n: int) -> int:
    """``T(k, n) * max{j : T(j, 1) <= T(k, n)}``."""
    limit = T(k, n)
    j = 1
    while T(j + 1, 1) <= limit:
        j += 1
    return limit * j


def segments_needed(T, k: int, tau: int) -> int:
    """Smallest ``n`` with ``T(k, n) >= tau``: the segment in which program ``k`` halts."""
    n = 1
    while T(k, n) < tau:
        n += 1
    return n


def log2_exact(x: int) -> int:
    if x <= 0 or x & (x - 1):
        raise ValueError(f"{x} is not a power of two")
    return x.bit_length() - 1


__all__ = [
    "Status", "a6519", "block_program", "blocks_given", "ProgramSlot", "ScheduleResult",
    "uds_run", "ubs_run", "check_cost_table", "doubling_table", "FixedRuntime",
    "verify_sched_index", "verify_partial_sums", "uds_bound", "ubs_theorem_bound",
    "ubs_corollary_bound", "segments_needed", "log2_exact",
]
