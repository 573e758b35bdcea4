"""Instance generators and an exact brute-force oracle for tiny instances."""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from .geometry import (
    Instance, Item, LimitExceeded, Params, Placement, PreconditionError, make_solution,
    orientation_tags, tol_for,
)

FAMILIES = ("thin-I1", "mixed-classes", "cubes", "lemma-feasible")
LEMMAS = ("nfdh_3d", "vol_pack_3d", "vol_pack_3dr", "stack_and_stein")


# -- hardness family ----------------------------------------------------------

def _hardness_dims(m):
    if not (isinstance(m, int) and 1 <= m <= 20):
        raise PreconditionError("m must be an integer in 1..20")
    n = 2 ** (m + 1)
    out = []
    for i in range(1, m + 1):
        a, b = 2 ** (i - 1), 2 ** i
        out.append(("G", i, (n + 1 - a, n + 1 - a, a)))
        out.append(("H", i, (a, n + 1 - a, n + 1 - b)))
        out.append(("I", i, (n + 1 - b, a, n + 1 - b)))
    return n, out


def gen_hardness(m):
    """3m unit-profit items that fill nested corners of a side-2^(m+1) cube."""
    n, dims = _hardness_dims(m)
    items = tuple(Item(k, float(w), float(d), float(h), Fraction(1)) for k, (_, _, (w, d, h)) in enumerate(dims))
    return Instance(float(n), items)


def hardness_optimal_packing(m):
    """G_i on the floor, H_i against the left wall, I_i against the front wall.

    Level i sits in the free cube left by the levels below it, whose corner
    is at (2^(i-1) - 1) on every axis.
    """
    inst = gen_hardness(m)
    pls = []
    for i in range(1, m + 1):
        a = float(2 ** (i - 1) - 1)
        s = float(2 ** (i - 1))
        g, h, it = (3 * (i - 1) + k for k in range(3))
        pls.append(Placement(g, "wdh", a, a, a))
        pls.append(Placement(h, "wdh", a, a, a + s))
        pls.append(Placement(it, "wdh", a + s, a, a + s))
    return make_solution(pls, inst.items, provenance=f"hardness-nesting/m={m}")


# -- random families ----------------------------------------------------------

def _floor9(x):
    return max(1e-9, math.floor(x * 1e9) / 1e9)


def _profits(rng, items_dims, mode):
    if mode == "unit":
        return [Fraction(1)] * len(items_dims)
    if mode == "volume":
        return [Fraction(w * d * h).limit_denominator(10 ** 12) for w, d, h in items_dims]
    return [Fraction(int(v)) for v in rng.integers(1, 21, size=len(items_dims))]


def _cap_volume(dims, budget, axis=2):
    """Shrink one extent of every item so the total volume stays within budget."""
    total = sum(w * d * h for w, d, h in dims)
    if total <= budget:
        return dims
    f = budget / total * (1 - 1e-6)
    out = []
    for t in dims:
        t = list(t)
        t[axis] = _floor9(t[axis] * f)
        out.append(tuple(t))
    return out


def _lemma_dims(rng, sub, n, eps):
    u = lambda lo, hi: float(rng.uniform(lo, hi))
    if sub == "nfdh_3d":
        dims = [(u(0.01, eps), u(0.01, eps), u(0.01, eps)) for _ in range(n)]
        return _cap_volume(dims, 1 - 3 * eps), False
    if sub == "vol_pack_3d":
        dims = []
        for _ in range(n):
            w, d = u(0.02, 1.0), u(0.02, 1.0)
            if w > 0.5 and d > 0.5:
                if rng.random() < 0.5:
                    w = u(0.02, 0.5)
                else:
                    d = u(0.02, 0.5)
            dims.append((w, d, u(0.1 * eps, eps)))
        return _cap_volume(dims, 1 / 3 - 2 * eps), False
    if sub == "vol_pack_3dr":
        dims = []
        for _ in range(n):
            t = [u(0.05, 1.0), u(0.05, 1.0), u(0.1 * eps * eps, eps * eps)]
            order = rng.permutation(3)
            dims.append(tuple(t[k] for k in order))
        budget = 7 / 24 - 5 * eps
        total = sum(a * b * c for a, b, c in dims)
        if total > budget:
            f = budget / total * (1 - 1e-6)
            dims = [tuple(_floor9(x * f) if x == min(t) else x for x in t) for t in dims]
        return dims, True
    if sub == "stack_and_stein":
        dims = [(u(0.02, 1.0), u(0.02, 1.0), u(0.1 * eps ** 4, eps ** 4)) for _ in range(n)]
        return _cap_volume(dims, 0.25), False
    raise PreconditionError(f"unknown lemma {sub!r}; expected one of {', '.join(LEMMAS)}")


def gen_random(family, n, seed, params=None):
    """Deterministic random instance of ``family`` with ``n`` items.

    ``params`` may set mu, eps, side, profit ("random", "unit", "volume")
    and rotation.
    """
    params = dict(params or {})
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    eps = float(params.get("eps", 0.1))
    mu = float(params.get("mu", 0.01))
    side = float(params.get("side", 1.0))
    rotation = bool(params.get("rotation", False))
    u = lambda lo, hi: float(rng.uniform(lo, hi))
    base, _, sub = family.partition(":")
    if base == "thin-I1":
        dims = [(u(0.05, 1.0), u(0.05, 1.0), u(0.05 * mu, mu)) for _ in range(n)]
    elif base == "cubes":
        dims = []
        for _ in range(n):
            s = u(0.1, 0.6)
            dims.append((s, s, s))
    elif base == "mixed-classes":
        dims = []
        for _ in range(n):
            kind = int(rng.integers(0, 4))
            if kind == 0:
                dims.append((u(0.15, 0.7), u(0.15, 0.7), u(0.15, 0.7)))
            else:
                t = [u(0.05, 1.0), u(0.05, 1.0)]
                t.insert(kind - 1, u(0.05 * mu, mu))
                dims.append(tuple(t))
    elif base == "lemma-feasible":
        dims, rot = _lemma_dims(rng, sub, n, eps)
        rotation = rotation or rot
    else:
        raise PreconditionError(f"unknown family {family!r}")
    dims = [tuple(_floor9(x) for x in t) for t in dims]
    profits = _profits(rng, dims, params.get("profit", "random"))
    items = tuple(Item(k, w * side, d * side, h * side, p) for k, ((w, d, h), p) in enumerate(zip(dims, profits)))
    return Instance(side, items, rotation, Params(eps=eps, mu=params.get("mu")))


# -- exact oracle -------------------------------------------------------------

def _key(x):
    return round(x, 9)


def _normal_coords(others, axis_extents, limit):
    """Sorted subset sums of the other items' extents not exceeding ``limit``."""
    sums = {0.0}
    for ext in others:
        sums |= {_key(s + e) for s in sums for e in ext if s + e <= limit + 1e-9}
    return sorted(sums)


class _Search:
    def __init__(self, side, node_limit):
        self.side = side
        self.tol = tol_for(side)
        self.nodes = 0
        self.node_limit = node_limit

    def feasible(self, subset):
        """Placements for every item of ``subset`` or None."""
        side, tol = self.side, self.tol
        opts = [list(orientation_tags(it, rot)) for it, rot in subset]
        opts = [[(t, d) for t, d in o if max(d) <= side + tol] for o in opts]
        if any(not o for o in opts):
            return None
        n = len(subset)
        # Extents each item can contribute along each axis.
        ext = [[sorted({d[a] for _, d in o}) for a in range(3)] for o in opts]
        order = sorted(range(n), key=lambda k: (-subset[k][0].volume, subset[k][0].id))
        cands = {}
        for k in range(n):
            for tag, d in opts[k]:
                per_axis = []
                for a in range(3):
                    others = [ext[j][a] for j in range(n) if j != k]
                    cs = [c for c in _normal_coords(others, a, side - d[a]) if c + d[a] <= side + tol]
                    per_axis.append(cs)
                cands[k, tag] = per_axis
        placed = []

        def clash(lo, hi):
            for plo, phi in placed:
                if all(lo[a] < phi[a] - tol and plo[a] < hi[a] - tol for a in range(3)):
                    return True
            return False

        out = {}

        def rec(idx):
            if idx == n:
                return True
            self.nodes += 1
            if self.nodes > self.node_limit:
                raise LimitExceeded("oracle node limit exceeded")
            k = order[idx]
            for tag, d in opts[k]:
                xs, ys, zs = cands[k, tag]
                if idx == 0:
                    # Reflection symmetry: the first item sits in the low half.
                    xs = [c for c in xs if c <= (side - d[0]) / 2 + tol]
                    ys = [c for c in ys if c <= (side - d[1]) / 2 + tol]
                    zs = [c for c in zs if c <= (side - d[2]) / 2 + tol]
                for z in zs:
                    for y in ys:
                        for x in xs:
                            lo = (x, y, z)
                            hi = (x + d[0], y + d[1], z + d[2])
                            if clash(lo, hi):
                                continue
                            placed.append((lo, hi))
                            out[k] = (tag, lo)
                            if rec(idx + 1):
                                return True
                            placed.pop()
            return False

        if rec(0):
            return [Placement(subset[k][0].id, tag, *lo) for k, (tag, lo) in out.items()]
        return None


def _pair_conflict(a, b, side, tol, rot):
    for _, da in orientation_tags(a, rot):
        for _, db in orientation_tags(b, rot):
            if any(da[k] + db[k] <= side + tol for k in range(3)):
                return False
    return True


def oracle_exact(instance, limit=8, node_limit=5_000_000):
    """Exact optimum by trying subsets in order of decreasing profit.

    Returns (profit, solution). Each subset is tested by a depth-first search
    over normal-pattern positions.
    """
    items = sorted(instance.items, key=lambda it: it.id)
    if len(items) > limit:
        raise LimitExceeded(f"oracle limited to {limit} items, got {len(items)}")
    side = instance.side
    tol = tol_for(side)
    rot = instance.allow_rotation
    items = [it for it in items if any(max(d) <= side + tol for _, d in orientation_tags(it, rot))]
    n = len(items)
    conflict = {(i, j) for i, j in combinations(range(n), 2)
                if _pair_conflict(items[i], items[j], side, tol, rot)}
    subsets = []
    for r in range(n + 1):
        for comb in combinations(range(n), r):
            if any((i, j) in conflict for i, j in combinations(comb, 2)):
                continue
            if sum(items[i].volume for i in comb) > side ** 3 * (1 + 1e-9):
                continue
            subsets.append(comb)
    subsets.sort(key=lambda c: (-sum((items[i].p for i in c), Fraction(0)), len(c), c))
    search = _Search(side, node_limit)
    for comb in subsets:
        got = search.feasible([(items[i], rot) for i in comb])
        if got is not None:
            sol = make_solution(got, instance.items, provenance="oracle-exact")
            return sol.profit, sol
    return Fraction(0), make_solution([], instance.items, provenance="oracle-exact")
