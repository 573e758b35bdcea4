"""Generalized assignment of items to containers.

Each container is a one-dimensional knapsack whose capacity is ``cap(C)``
and in which item i has size ``f_C(i)``. Profits do not depend on the
container.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .containers import cap, f_C
from .geometry import LimitExceeded, PreconditionError

INADMISSIBLE = math.inf


@dataclass(frozen=True)
class GapInstance:
    caps: tuple
    sizes: np.ndarray  # n x k, inf where inadmissible
    profits: tuple
    ids: tuple

    def __post_init__(self):
        n = len(self.ids)
        if len(self.caps) < 1:
            raise PreconditionError("GAP needs at least one knapsack")
        if self.sizes.shape != (n, len(self.caps)):
            raise PreconditionError("sizes must be n x k")
        if np.any(self.sizes < 0):
            raise PreconditionError("sizes must be nonnegative")
        if len(self.profits) != n:
            raise PreconditionError("one profit per item")

    @property
    def n(self):
        return len(self.ids)

    @property
    def k(self):
        return len(self.caps)


@dataclass(frozen=True)
class GapResult:
    """``assignment[i]`` is a knapsack index or None for item ``ids[i]``."""

    assignment: tuple
    profit: Fraction
    optimal: bool
    nodes: int = 0

    def groups(self, g):
        out = [[] for _ in range(g.k)]
        for i, j in enumerate(self.assignment):
            if j is not None:
                out[j].append(g.ids[i])
        return out


def build_gap_instance(containers, items, allow_rotation=False):
    items = sorted(items, key=lambda it: it.id)
    sizes = np.full((len(items), len(containers)), INADMISSIBLE)
    for i, it in enumerate(items):
        for j, c in enumerate(containers):
            s = f_C(c, it, allow_rotation)
            if s is not None:
                sizes[i, j] = s
    return GapInstance(tuple(cap(c) for c in containers), sizes,
                       tuple(Fraction(it.p) for it in items), tuple(it.id for it in items))


def _tol(c):
    return 1e-9 * max(1.0, abs(c))


def scaled_profits(profits):
    """Integers proportional to the rational profits, with their common denominator."""
    den = 1
    for p in profits:
        den = den * p.denominator // math.gcd(den, p.denominator)
    return [int(p * den) for p in profits], den


def check_assignment(g, assignment):
    loads = [0.0] * g.k
    for i, j in enumerate(assignment):
        if j is None:
            continue
        if not math.isfinite(g.sizes[i, j]):
            return False
        loads[j] += g.sizes[i, j]
    return all(loads[j] <= g.caps[j] + _tol(g.caps[j]) for j in range(g.k))


def solve_gap_exact(g, node_limit=2_000_000, max_n=40, max_k=12):
    """Depth-first branch and bound; returns the lexicographically first optimum.

    Items are branched in id order, knapsacks in index order with "unassigned"
    last. The bound is the fractional knapsack of the remaining items using
    each item's smallest size against the total remaining capacity.
    """
    n, k = g.n, g.k
    if n > max_n or k > max_k:
        raise LimitExceeded(f"GAP instance too large for the exact solver (n={n}, k={k})")
    prof, den = scaled_profits(g.profits)
    sizes = g.sizes
    caps = list(g.caps)
    tols = [_tol(c) for c in caps]
    smin = [float(np.min(sizes[i])) if k else math.inf for i in range(n)]
    # Fractional bound order of each suffix, densest first.
    suffix = []
    for start in range(n + 1):
        rest = [i for i in range(start, n) if math.isfinite(smin[i]) and prof[i] > 0]
        rest.sort(key=lambda i: (-(prof[i] / smin[i]) if smin[i] > 0 else -math.inf, i))
        suffix.append(rest)

    loads = [0.0] * k
    assign = [None] * n
    best = [-1, [None] * n]
    nodes = [0]
    truncated = [False]

    def bound(start, cur):
        room = sum(max(0.0, caps[j] + tols[j] - loads[j]) for j in range(k))
        total = float(cur)
        for i in suffix[start]:
            s = smin[i]
            if s <= room:
                room -= s
                total += prof[i]
            else:
                total += prof[i] * room / s
                break
        return total

    def dfs(i, cur):
        nodes[0] += 1
        if nodes[0] > node_limit:
            truncated[0] = True
            return
        if i == n:
            if cur > best[0]:
                best[0] = cur
                best[1] = list(assign)
            return
        b = bound(i, cur)
        if b + 1e-7 * max(1.0, b) < best[0] + 1:
            return
        for j in range(k):
            s = sizes[i, j]
            if math.isfinite(s) and loads[j] + s <= caps[j] + tols[j]:
                loads[j] += s
                assign[i] = j
                dfs(i + 1, cur + prof[i])
                loads[j] -= s
                assign[i] = None
                if truncated[0]:
                    return
        dfs(i + 1, cur)

    dfs(0, 0)
    profit = Fraction(max(best[0], 0), den)
    return GapResult(tuple(best[1]), profit, not truncated[0], nodes[0])


def solve_gap_greedy(g):
    """Density first-fit, or the best single item when that is worth more."""
    n, k = g.n, g.k
    smin = [float(np.min(g.sizes[i])) for i in range(n)]
    order = [i for i in range(n) if math.isfinite(smin[i])]
    order.sort(key=lambda i: (-(float(g.profits[i]) / smin[i]) if smin[i] > 0 else -math.inf, i))
    loads = [0.0] * k
    assign = [None] * n
    for i in order:
        for j in range(k):
            s = g.sizes[i, j]
            if math.isfinite(s) and loads[j] + s <= g.caps[j] + _tol(g.caps[j]):
                loads[j] += s
                assign[i] = j
                break
    profit = sum((g.profits[i] for i in range(n) if assign[i] is not None), Fraction(0))
    single = None
    for i in range(n):
        for j in range(k):
            s = g.sizes[i, j]
            if math.isfinite(s) and s <= g.caps[j] + _tol(g.caps[j]):
                if single is None or g.profits[i] > g.profits[single[0]]:
                    single = (i, j)
                break
    if single is not None and g.profits[single[0]] > profit:
        assign = [None] * n
        assign[single[0]] = single[1]
        profit = g.profits[single[0]]
    return GapResult(tuple(assign), profit, False)
