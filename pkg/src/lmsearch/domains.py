"""Seeded problem instances.

Every built-in domain encodes its states as nonnegative 64-bit integers and
describes itself with three jitted step functions (number of children, i-th
child with its cost increment, goal test).  The same functions drive both the
compiled depth-first search and, through ``py_func``, the pure Python one.

Domains
-------
Chain
    Branching factor 1, ``f = depth + 1``, goal at depth ``d``.  The chain
    continues past the goal, so the node right after the goal sits in the
    fringe at cost ``d + 2``.
Coconut
    ``b`` trunks of height ``D`` under the root, a ``b``-ary branch tree on top
    of each trunk, the coconut hidden in one branch tree at depth ``q``.
    Costs are stored x10: root 10, climb 10, jump between trunks ``20 D``,
    branch step 1.  The heuristic is zero.
TilePuzzle
    3x3 sliding tiles with the Manhattan heuristic, scrambled by random blank
    moves.
Pancake
    ``n`` pancakes with the gap heuristic.

Operator costs of the tile and pancake puzzles can be redrawn uniformly in
``[1, 10000]`` with :func:`random_operator_costs`; the heuristic is then
dropped so that ``f`` stays nondecreasing.
"""
from __future__ import annotations

import copy
from typing import NamedTuple

import numpy as np
from numba import njit

from .core import Domain, SearchNode

MAX_OPERATOR_COST = 10_000


class KernelSpec(NamedTuple):
    n_children: object
    child: object
    is_goal: object
    params: object
    scale: float
    depth_hint: int


class KernelDomain(Domain):
    """Domain described by jitted step functions over integer states."""

    name = ""
    _steps: tuple = ()  # (n_children, child, is_goal) dispatchers

    def __init__(self, params, root_state, root_f, *, seed=None, gen_params=None):
        self.params = params
        self.seed = seed
        self.gen_params = dict(gen_params or {})
        self.scale = 1.0
        self.shift = 0.0
        self._root_state = int(root_state)
        self._root_f = float(root_f)
        self._set_root()

    def _set_root(self):
        self.root = SearchNode(self._root_state, self.scale * self._root_f + self.shift, 0)

    @property
    def _pyparams(self):
        p = self.__dict__.get("_pp")
        if p is None:
            p = _to_python(self.params)
            self.__dict__["_pp"] = p
        return p

    @property
    def spec_line(self):
        return format_instance(self.name, self.seed, self.gen_params)

    def children(self, node):
        n_children, child, _ = (fn.py_func for fn in self._steps)
        p = self._pyparams
        s, f, depth = node.state, node.f, node.depth + 1
        k = self.scale
        out = []
        for i in range(n_children(s, p)):
            cs, delta = child(s, i, p)
            out.append(SearchNode(cs, f + k * delta, depth))
        return out

    def is_goal(self, node):
        return bool(self._steps[2].py_func(node.state, self._pyparams))

    def kernel(self):
        n_children, child, is_goal = self._steps
        return KernelSpec(n_children, child, is_goal, self.params, self.scale, self.depth_hint)

    def affine(self, scale=1.0, shift=0.0):
        if scale == 1.0 and shift == 0.0:
            return self
        if not scale > 0:
            raise ValueError("scale must be positive")
        other = copy.copy(self)
        other.scale = self.scale * scale
        other.shift = self.shift * scale + shift
        other.cost_unit = self.cost_unit * scale
        other._set_root()
        return other

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec_line}>"


def _to_python(params):
    if isinstance(params, tuple):
        return tuple(_to_python(p) for p in params)
    return params.tolist()


# ---------------------------------------------------------------- chain


@njit(cache=True)
def _chain_n_children(s, p):
    return 1


@njit(cache=True)
def _chain_child(s, i, p):
    return s + 1, 1


@njit(cache=True)
def _chain_is_goal(s, p):
    return s == p[0]


class Chain(KernelDomain):
    name = "chain"
    _steps = (_chain_n_children, _chain_child, _chain_is_goal)
    branching_bound = 1

    def __init__(self, d, **kw):
        if d < 0:
            raise ValueError("chain depth must be nonnegative")
        self.d = int(d)
        self.depth_hint = self.d + 2
        super().__init__(np.array([self.d], np.int64), 0, 1.0, **kw)


def gen_chain(seed, d=None, max_d=10_000):
    """Chain whose goal depth is uniform in ``[1, max_d]`` unless ``d`` is given."""
    gp = {}
    if d is None:
        rng = np.random.default_rng(seed)
        d = int(rng.integers(1, max_d + 1))
        if max_d != 10_000:
            gp["max_d"] = max_d
    else:
        gp["d"] = d
    return Chain(d, seed=seed, gen_params=gp)


# ---------------------------------------------------------------- coconut
# state layout: kind (2 bits: 0 root, 1 trunk, 2 branch) | trunk (4 bits)
#               | height (14 bits) | on-goal-path (1 bit) | branch depth

_H_MASK = (1 << 14) - 1


@njit(cache=True)
def _coco_n_children(s, p):
    return p[0]


@njit(cache=True)
def _coco_child(s, i, p):
    kind = s & 3
    if kind == 0:
        return 1 | (i << 2) | (1 << 6), 10
    t = (s >> 2) & 15
    if kind == 1:
        h = (s >> 6) & _H_MASK
        if h < p[1]:
            if i == 0:
                return 1 | (t << 2) | ((h + 1) << 6), 10
            u = i - 1
            if u >= t:
                u += 1
            return 1 | (u << 2) | (h << 6), 20 * p[1]
        on = 1 if (t == p[2] and p[3] > 0 and p[4] == i) else 0
        return 2 | (t << 2) | (on << 20) | (1 << 21), 1
    r = s >> 21
    on = (s >> 20) & 1
    on2 = 1 if (on == 1 and r < p[3] and p[4 + r] == i) else 0
    return 2 | (t << 2) | (on2 << 20) | ((r + 1) << 21), 1


@njit(cache=True)
def _coco_is_goal(s, p):
    kind = s & 3
    if kind == 2:
        return ((s >> 20) & 1) == 1 and (s >> 21) == p[3]
    if kind == 1:
        return p[3] == 0 and ((s >> 2) & 15) == p[2] and ((s >> 6) & _H_MASK) == p[1]
    return False


class Coconut(KernelDomain):
    name = "coconut"
    _steps = (_coco_n_children, _coco_child, _coco_is_goal)
    cost_unit = 10.0

    def __init__(self, b, D, trunk, q, position, **kw):
        if b < 2:
            raise ValueError("Coconut needs at least 2 trunks")
        if b > 8:
            raise ValueError("at most 8 trunks are supported")
        if not 1 <= D <= _H_MASK:
            raise ValueError(f"trunk height must be in [1, {_H_MASK}]")
        if not 0 <= trunk < b:
            raise ValueError("coconut trunk out of range")
        if not 0 <= position < b**q:
            raise ValueError("coconut position out of range")
        self.b, self.D, self.trunk, self.q, self.position = b, D, trunk, q, position
        digits = []
        for _ in range(q):
            digits.append(position % b)
            position //= b
        digits.reverse()  # first digit picks the child at branch depth 1
        self.branching_bound = b
        self.depth_hint = D + q + 16
        params = np.array([b, D, trunk, q] + digits, np.int64)
        super().__init__(params, 0, 10.0, **kw)

    @property
    def goal_cost(self):
        """Cost of the coconut, in stored (x10) units."""
        return 10 + 10 * self.D + self.q


def gen_coconut(seed, b=3, D=None, q=None, trunk=None, position=None,
                max_D=10_000, max_q=20):
    """Coconut instance; any of D, q, trunk, position may be forced."""
    gp = {"b": b}
    for key, val in (("D", D), ("q", q), ("trunk", trunk), ("position", position)):
        if val is not None:
            gp[key] = val
    if max_D != 10_000:
        gp["max_D"] = max_D
    if max_q != 20:
        gp["max_q"] = max_q
    if b < 2:
        raise ValueError("Coconut needs at least 2 trunks")
    rng = np.random.default_rng(seed)
    d_draw = int(rng.integers(1, max_D + 1))
    t_draw = int(rng.integers(0, b))
    q_draw = min(int(rng.geometric(0.25)) - 1, max_q)
    D = d_draw if D is None else D
    trunk = t_draw if trunk is None else trunk
    q = q_draw if q is None else q
    if position is None:
        position = int(rng.integers(0, b**q)) if q > 0 else 0
    return Coconut(b, D, trunk, q, position, seed=seed, gen_params=gp)


# ---------------------------------------------------------------- 8-puzzle

_TILE_BITS = (1 << 36) - 1
_TILES_GOAL = sum(t << (4 * t) for t in range(9))


@njit(cache=True)
def _manhattan(tile, cell):
    return abs(cell // 3 - tile // 3) + abs(cell % 3 - tile % 3)


@njit(cache=True)
def _tiles_n_children(s, p):
    b = (s >> 36) & 15
    r = b // 3
    c = b % 3
    n = 0
    if r > 0:
        n += 1
    if r < 2:
        n += 1
    if c > 0:
        n += 1
    if c < 2:
        n += 1
    return n


@njit(cache=True)
def _tiles_child(s, i, p):
    b = (s >> 36) & 15
    r = b // 3
    c = b % 3
    seen = 0
    x = -1
    op = -1
    for d in range(4):  # blank moves up, down, left, right
        if d == 0:
            ok = r > 0
            tx = b - 3
        elif d == 1:
            ok = r < 2
            tx = b + 3
        elif d == 2:
            ok = c > 0
            tx = b - 1
        else:
            ok = c < 2
            tx = b + 1
        if ok:
            if seen == i:
                x = tx
                op = 4 * b + d
                break
            seen += 1
    t = (s >> (4 * x)) & 15
    clear = (15 << (4 * x)) | (15 << (4 * b)) | (15 << 36)
    ns = (s & ~clear) | (t << (4 * b)) | (x << 36)
    if p[0] == 1:
        return ns, 1 + _manhattan(t, b) - _manhattan(t, x)
    return ns, p[1 + op]


@njit(cache=True)
def _tiles_is_goal(s, p):
    return (s & _TILE_BITS) == _TILES_GOAL


def encode_tiles(cells):
    """Encode a 9-tuple (tile per cell, 0 = blank) as a state integer."""
    if sorted(cells) != list(range(9)):
        raise ValueError("cells must be a permutation of 0..8")
    s = 0
    for pos, t in enumerate(cells):
        s |= t << (4 * pos)
    return s | (list(cells).index(0) << 36)


def decode_tiles(state):
    return tuple((state >> (4 * i)) & 15 for i in range(9))


def manhattan(cells):
    return sum(_manhattan.py_func(t, pos) for pos, t in enumerate(cells) if t != 0)


class TilePuzzle(KernelDomain):
    name = "tiles"
    _steps = (_tiles_n_children, _tiles_child, _tiles_is_goal)
    branching_bound = 4
    n_operators = 36
    depth_hint = 64

    def __init__(self, cells, op_costs=None, **kw):
        self.cells = tuple(cells)
        self.op_costs = None if op_costs is None else tuple(int(c) for c in op_costs)
        use_h = self.op_costs is None
        costs = [1] * self.n_operators if use_h else list(self.op_costs)
        if len(costs) != self.n_operators:
            raise ValueError(f"need {self.n_operators} operator costs")
        params = np.array([1 if use_h else 0] + costs, np.int64)
        root_f = manhattan(self.cells) if use_h else 0.0
        super().__init__(params, encode_tiles(self.cells), root_f, **kw)

    def with_operator_costs(self, costs):
        return TilePuzzle(self.cells, costs, seed=self.seed, gen_params=self.gen_params)


def gen_tiles(seed, random_costs=False, moves=30):
    """8-puzzle reached from the goal by ``moves`` random blank moves."""
    rng = np.random.default_rng(seed)
    cells = list(range(9))
    blank, prev = 0, -1
    for _ in range(moves):
        r, c = divmod(blank, 3)
        options = [x for x, ok in ((blank - 3, r > 0), (blank + 3, r < 2),
                                   (blank - 1, c > 0), (blank + 1, c < 2))
                   if ok and x != prev]
        x = options[int(rng.integers(len(options)))]
        cells[blank], cells[x] = cells[x], 0
        prev, blank = blank, x
    gp = {}
    if moves != 30:
        gp["moves"] = moves
    dom = TilePuzzle(cells, seed=seed, gen_params=gp)
    if random_costs:
        dom = random_operator_costs(dom, rng)
        dom.gen_params["random_costs"] = 1
    return dom


# ---------------------------------------------------------------- pancake


@njit(cache=True)
def _pancake_n_children(s, p):
    return p[0] - 1


@njit(cache=True)
def _pancake_child(s, i, p):
    n = p[0]
    k = i + 2
    ns = s
    for a in range(k):
        v = (s >> (4 * a)) & 15
        pos = k - 1 - a
        ns = (ns & ~(15 << (4 * pos))) | (v << (4 * pos))
    if p[1] == 1:
        below = n if k == n else (s >> (4 * k)) & 15
        old = 1 if abs(((s >> (4 * (k - 1))) & 15) - below) != 1 else 0
        new = 1 if abs((s & 15) - below) != 1 else 0
        return ns, 1 + new - old
    return ns, p[3 + k]


@njit(cache=True)
def _pancake_is_goal(s, p):
    return s == p[2]


def gap_heuristic(stack):
    n = len(stack)
    seq = list(stack) + [n]
    return sum(1 for a, b in zip(seq, seq[1:]) if abs(a - b) != 1)


class Pancake(KernelDomain):
    name = "pancake"
    _steps = (_pancake_n_children, _pancake_child, _pancake_is_goal)
    depth_hint = 64

    def __init__(self, stack, op_costs=None, **kw):
        n = len(stack)
        if not 2 <= n <= 15 or sorted(stack) != list(range(n)):
            raise ValueError("stack must be a permutation of 0..n-1 with 2 <= n <= 15")
        self.stack = tuple(int(x) for x in stack)
        self.n = n
        self.branching_bound = n - 1
        self.n_operators = n + 1  # flip sizes index the cost table; 0 and 1 unused
        self.op_costs = None if op_costs is None else tuple(int(c) for c in op_costs)
        use_h = self.op_costs is None
        costs = [1] * self.n_operators if use_h else list(self.op_costs)
        if len(costs) != self.n_operators:
            raise ValueError(f"need {self.n_operators} operator costs")
        goal = sum(i << (4 * i) for i in range(n))
        state = sum(v << (4 * i) for i, v in enumerate(self.stack))
        params = np.array([n, 1 if use_h else 0, goal] + costs, np.int64)
        root_f = gap_heuristic(self.stack) if use_h else 0.0
        super().__init__(params, state, root_f, **kw)

    def with_operator_costs(self, costs):
        return Pancake(self.stack, costs, seed=self.seed, gen_params=self.gen_params)


def decode_pancake(state, n):
    return tuple((state >> (4 * i)) & 15 for i in range(n))


def gen_pancake(seed, random_costs=False, size=10):
    """Uniformly shuffled stack of ``size`` pancakes."""
    rng = np.random.default_rng(seed)
    stack = [int(x) for x in rng.permutation(size)]
    gp = {}
    if size != 10:
        gp["size"] = size
    dom = Pancake(stack, seed=seed, gen_params=gp)
    if random_costs:
        dom = random_operator_costs(dom, rng)
        dom.gen_params["random_costs"] = 1
    return dom


def random_operator_costs(domain, seed):
    """Give every operator of ``domain`` a fixed cost drawn from [1, 10000].

    ``seed`` may be an int or a numpy Generator.  The returned domain has no
    heuristic (h = 0).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    costs = rng.integers(1, MAX_OPERATOR_COST + 1, size=domain.n_operators)
    return domain.with_operator_costs(costs)


# ---------------------------------------------------------------- explicit trees


@njit(cache=True)
def _tree_n_children(s, p):
    return p[0][s + 1] - p[0][s]


@njit(cache=True)
def _tree_child(s, i, p):
    c = p[1][p[0][s] + i]
    return c, p[2][c] - p[2][s]


@njit(cache=True)
def _tree_is_goal(s, p):
    return p[3][s]


class TreeDomain(KernelDomain):
    """Finite tree given explicitly: node 0 is the root.

    ``f`` lists the node costs, ``children`` the ordered child ids of every
    node and ``goals`` the goal ids.
    """

    name = "tree"
    _steps = (_tree_n_children, _tree_child, _tree_is_goal)

    def __init__(self, f, children, goals=(), **kw):
        n = len(f)
        if len(children) != n:
            raise ValueError("need one child list per node")
        offsets = np.zeros(n + 1, np.int64)
        for i, ch in enumerate(children):
            offsets[i + 1] = offsets[i] + len(ch)
        kids = np.array([c for ch in children for c in ch], np.int64)
        fv = np.asarray(f, np.float64)
        goal = np.zeros(n, np.bool_)
        goal[list(goals)] = True
        for i, ch in enumerate(children):
            for c in ch:
                if fv[c] < fv[i]:
                    raise ValueError(f"f decreases from node {i} to child {c}")
        self.branching_bound = max((len(ch) for ch in children), default=0) or 1
        self.depth_hint = 64
        super().__init__((offsets, kids, fv, goal), 0, fv[0], **kw)

    @property
    def spec_line(self):
        return ""


def complete_tree(branching, height, goal=None, edge_cost=1):
    """Complete ``branching``-ary tree of the given height with ``f = depth + 1``.

    ``goal`` is a path of child indices from the root, or None.
    """
    f, children, depth, path_of = [1.0], [[]], [0], {(): 0}
    frontier = [()]
    for _ in range(height):
        nxt = []
        for path in frontier:
            u = path_of[path]
            for i in range(branching):
                p2 = path + (i,)
                v = len(f)
                path_of[p2] = v
                f.append(f[u] + edge_cost)
                children.append([])
                depth.append(len(p2))
                children[u].append(v)
                nxt.append(p2)
        frontier = nxt
    goals = () if goal is None else (path_of[tuple(goal)],)
    return TreeDomain(f, children, goals)


def random_tree(seed, n_nodes=60, max_children=3, increments=(0, 1, 2, 3), goal_prob=0.1):
    """Random finite tree with integer, nondecreasing costs and at least one goal."""
    rng = np.random.default_rng(seed)
    f = [float(rng.integers(1, 4))]
    children = [[]]
    queue = [0]
    while queue and len(f) < n_nodes:
        u = queue.pop(0)
        for _ in range(int(rng.integers(0, max_children + 1))):
            if len(f) >= n_nodes:
                break
            v = len(f)
            f.append(f[u] + float(increments[int(rng.integers(len(increments)))]))
            children.append([])
            children[u].append(v)
            queue.append(v)
    goals = [v for v in range(1, len(f)) if rng.random() < goal_prob]
    if not goals:
        goals = [len(f) - 1]
    return TreeDomain(f, children, goals)


# ---------------------------------------------------------------- instance lines

GENERATORS = {
    "chain": gen_chain,
    "coconut": gen_coconut,
    "tiles": gen_tiles,
    "pancake": gen_pancake,
}


def format_instance(name, seed, params):
    body = ",".join(f"{k}={v}" for k, v in params.items())
    return f"domain:{name};seed:{seed};params:{body}"


def parse_instance(line):
    """Rebuild a domain from its canonical ``domain:..;seed:..;params:..`` line."""
    fields = {}
    for part in line.strip().split(";"):
        key, sep, val = part.partition(":")
        if not sep:
            raise ValueError(f"malformed instance line: {line!r}")
        fields[key] = val
    try:
        name, seed = fields["domain"], int(fields["seed"])
    except KeyError as exc:
        raise ValueError(f"malformed instance line: {line!r}") from exc
    if name not in GENERATORS:
        raise ValueError(f"unknown domain {name!r}")
    kwargs = {}
    for item in filter(None, fields.get("params", "").split(",")):
        k, _, v = item.partition("=")
        kwargs[k] = int(v)
    if "random_costs" in kwargs:
        kwargs["random_costs"] = bool(kwargs["random_costs"])
    return GENERATORS[name](seed, **kwargs)


def instance_seeds(seed, count):
    """``count`` 64-bit instance seeds derived from one master seed."""
    ss = np.random.SeedSequence(seed)
    return [int(x) for x in ss.generate_state(count, dtype=np.uint64)]
