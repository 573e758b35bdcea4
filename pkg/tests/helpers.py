"""Random inputs that satisfy each packer's hypotheses, plus a box checker."""

import numpy as np

from cubik._kernels import overlap_pairs
from cubik.geometry import Box3D, Cuboid, Item, Rect, Region2D, orient

TOL = 1e-9


def boxes_violations(origin, size, boxes):
    """Boxes are (id, (x, y, z), (w, d, h)). Returns a list of problems."""
    out = []
    if not boxes:
        return out
    tol = TOL * max(1.0, max(size))
    lo = np.array([b[1] for b in boxes], dtype=float)
    dims = np.array([b[2] for b in boxes], dtype=float)
    hi = lo + dims
    o = np.asarray(origin, dtype=float)
    s = np.asarray(size, dtype=float)
    bad = np.any(lo < o - tol, axis=1) | np.any(hi > o + s + tol, axis=1)
    for n in np.flatnonzero(bad):
        out.append(f"{boxes[n][0]} out of bounds")
    for i, j in overlap_pairs(lo, hi, tol):
        out.append(f"{boxes[i][0]} overlaps {boxes[j][0]}")
    ids = [b[0] for b in boxes]
    if len(set(ids)) != len(ids):
        out.append("duplicate ids")
    return out


def placements_3d(placements, lookup):
    return [(pl.item_id, (pl.x, pl.y, pl.z), orient(lookup[pl.item_id], pl.orient)) for pl in placements]


def rect_boxes(placements, lookup):
    """2D placements as flat boxes so the 3D checker applies."""
    out = []
    for pl in placements:
        r = lookup[pl.id]
        ln, br = (r.br, r.len) if pl.rotated else (r.len, r.br)
        out.append((pl.id, (pl.x, pl.y, 0.0), (ln, br, 1.0)))
    return out


def _prefix(sizes, budget):
    """Length of the longest prefix of ``sizes`` whose sum stays within budget."""
    return int(np.searchsorted(np.cumsum(sizes), budget, side="right"))


def _target(rng, budget):
    # A third of the trials aim right at the budget, the rest below it.
    return budget if rng.random() < 1 / 3 else budget * rng.uniform(0.2, 1.0)


def nfdh2d_input(rng, eps, max_n=1500):
    L, B = rng.uniform(0.5, 2.0, size=2)
    ln = eps * L * rng.uniform(0.05, 1.0, max_n)
    br = eps * B * rng.uniform(0.05, 1.0, max_n)
    k = _prefix(ln * br, _target(rng, (1 - 2 * eps) * L * B))
    return Region2D(L, B), [Rect(i, float(ln[i]), float(br[i])) for i in range(k)]


def nfdh3d_input(rng, eps, max_n=600):
    W, D, H = rng.uniform(0.5, 2.0, size=3)
    dims = eps * np.array([W, D, H]) * rng.uniform(0.3, 1.0, size=(max_n, 3))
    k = _prefix(dims.prod(axis=1), _target(rng, (1 - 3 * eps) * W * D * H))
    return Box3D(W, D, H), [Cuboid(i, *map(float, dims[i])) for i in range(k)]


def steinberg_input(rng, max_n=40):
    L, B = rng.uniform(0.5, 2.0, size=2)
    region = Region2D(L, B)
    big = rng.uniform(0.1, 1.0)
    rects = []
    a = b = area = 0.0
    for _ in range(max_n * 3):
        if len(rects) >= max_n:
            break
        ln, br = L * rng.uniform(0.01, big), B * rng.uniform(0.01, big)
        a2, b2, area2 = max(a, ln), max(b, br), area + ln * br
        if 2 * area2 <= L * B - max(2 * a2 - L, 0.0) * max(2 * b2 - B, 0.0):
            rects.append(Rect(len(rects), ln, br))
            a, b, area = a2, b2, area2
    return region, rects


def _half_dims(rng, n, W, D, hmax):
    """Dims with w <= W/2 or d <= D/2 and h <= hmax."""
    u = rng.uniform(0.02, 1.0, size=(n, 2))
    half = rng.random(n) < 0.5
    u[half, 0] *= 0.5
    u[~half, 1] *= 0.5
    h = hmax * rng.uniform(0.05, 1.0, n)
    return np.column_stack([W * u[:, 0], D * u[:, 1], h])


def volpack3d_input(rng, eps, max_n=200):
    W, D, H = rng.uniform(0.5, 2.0, size=3)
    dims = _half_dims(rng, max_n, W, D, eps * H)
    k = _prefix(dims.prod(axis=1), _target(rng, (1 / 3 - 2 * eps) * W * D * H))
    return Box3D(W, D, H), [Cuboid(i, *map(float, dims[i])) for i in range(k)]


def layers_input(rng, max_n=60):
    W, D = rng.uniform(0.5, 2.0, size=2)
    n = int(rng.integers(1, max_n + 1))
    dims = _half_dims(rng, n, W, D, rng.uniform(0.01, 1.0))
    return (W, D), [Cuboid(i, *map(float, dims[i])) for i in range(n)]


def sheets_input(rng, delta, max_n=400):
    L = rng.uniform(0.5, 2.0)
    while True:
        B = L * rng.uniform(0.3, 1.0)
        budget = L * B - L * L / 4 - 3 * delta * B * B
        if budget > 0.02 * L * B:
            break
    ln = L * rng.uniform(0.5, 1.0, max_n)
    br = delta * B * rng.uniform(0.05, 1.0, max_n)
    k = _prefix(ln * br, _target(rng, budget))
    return Region2D(L, B), [Rect(i, float(ln[i]), float(br[i])) for i in range(k)], delta


def vol3dr_input(rng, eps, max_n=1500):
    """Items that become thin (height <= eps^2 w) in some orientation."""
    w = rng.uniform(0.5, 2.0)
    q = eps * eps * w
    sheet = rng.random(max_n) < rng.choice([0.0, 0.2, 0.6, 1.0])
    a = np.where(sheet, np.maximum(w * rng.uniform(0.5, 1.0, max_n), w / 2 + 1e-6), w * rng.uniform(0.2, 1.0, max_n))
    b = np.where(sheet, np.maximum(w * rng.uniform(0.5, 1.0, max_n), w / 2 + 1e-6), w * rng.uniform(0.2, 0.5, max_n))
    t = q * rng.uniform(0.3, 1.0, max_n)
    dims = rng.permuted(np.column_stack([a, b, t]), axis=1)
    k = _prefix(dims.prod(axis=1), _target(rng, (7 / 24 - 5 * eps) * w ** 3))
    return Box3D(w, w, w), [Item(i, *map(float, dims[i])) for i in range(k)]


def container_input(rng, kind, eps, max_n=300):
    """A container in the unit knapsack and admissible items with sum f_C <= cap."""
    from fractions import Fraction

    from cubik.containers import Container, cap, f_C

    W, D, H = rng.uniform(0.2, 1.0, size=3)
    if kind == "LCont":
        W = rng.uniform(0.3, 1.0)
        H = W * rng.uniform(0.25 + 1e-3, 1.0)
    c = Container(kind, W, D, H, eps=eps)
    n = max_n
    u = rng.uniform(0.05, 1.0, size=(n, 3))
    if kind == "Stack":
        dims = np.column_stack([W * u[:, 0], D * u[:, 1], H * u[:, 2] * rng.uniform(0.02, 0.5)])
    elif kind == "Area":
        dims = np.column_stack([eps * W * u[:, 0], D * u[:, 1], eps * H * u[:, 2]])
    elif kind == "Volume":
        dims = eps * np.array([W, D, H]) * u
    elif kind == "Steinberg":
        dims = _half_dims(rng, n, W, D, eps * H)
    else:
        dims = np.column_stack([W * (0.5 + 0.5 * u[:, 0]), D * (0.5 + 0.5 * u[:, 1]), eps * H * u[:, 2]])
    prof = rng.integers(1, 100, size=n)
    items = [Item(i, *map(float, dims[i]), Fraction(int(prof[i]))) for i in range(n)]
    sizes = np.array([f_C(c, it) for it in items])
    k = _prefix(sizes, _target(rng, cap(c)))
    return c, items[:k]
