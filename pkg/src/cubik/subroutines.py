"""Shelf, Steinberg, stacking and sheet packers.

Rectangles are ``Rect(id, len, br)``: ``len`` runs along x, ``br`` along y.
Three dimensional routines take anything with ``id, w, d, h`` attributes and
never rotate; the orientation of what they receive is what gets placed.
"""

from .geometry import (
    Box3D, PackingError, Placement, PreconditionError, Rect, RectPlacement, Region2D, IDENTITY, tol_for,
)


def _pos(x):
    return x if x > 0.0 else 0.0


# -- NFDH --------------------------------------------------------------------

def nfdh_2d(region, rects):
    """Next-Fit Decreasing Height. Returns (placements, unpacked ids)."""
    tol = tol_for(max(region.len, region.br))
    order = sorted(rects, key=lambda r: (-r.br, r.id))
    out = []
    x = y = 0.0
    shelf = None
    for n, r in enumerate(order):
        if shelf is None:
            if r.br > region.br + tol or r.len > region.len + tol:
                return out, [q.id for q in order[n:]]
            shelf = r.br
        elif x + r.len > region.len + tol:
            y += shelf
            x = 0.0
            shelf = r.br
            if y + shelf > region.br + tol or r.len > region.len + tol:
                return out, [q.id for q in order[n:]]
        out.append(RectPlacement(r.id, region.x0 + x, region.y0 + y))
        x += r.len
    return out, []


def nfdh_3d(box, items):
    """Layered 3D-NFDH: each layer is the longest prefix NFDH fits on the base."""
    tol = tol_for(max(box.w, box.d, box.h))
    order = sorted(items, key=lambda it: (-it.h, it.id))
    base = Region2D(box.w, box.d, box.x0, box.y0)
    out = []
    z = 0.0
    start = 0
    rects = [Rect(it.id, it.w, it.d) for it in order]
    while start < len(order):
        first = order[start]
        if z + first.h > box.h + tol:
            break
        # Binary search for a prefix that fits while one more item does not.
        lo, hi = 0, len(order) - start
        placed = []
        while lo < hi:
            mid = (lo + hi + 1) // 2
            got, rest = nfdh_2d(base, rects[start:start + mid])
            if rest:
                hi = mid - 1
            else:
                lo, placed = mid, got
        if lo == 0:
            break
        for pl in placed:
            out.append(Placement(pl.id, IDENTITY, pl.x, pl.y, box.z0 + z))
        start += lo
        z += first.h
    return out, [it.id for it in order[start:]]


# -- Steinberg ---------------------------------------------------------------

def steinberg_condition(region, rects):
    """2 a(S) <= l b - (2 l_max - l)+ (2 b_max - b)+."""
    tol = tol_for(max(region.len, region.br))
    if not rects:
        return True
    for r in rects:
        if r.len > region.len + tol or r.br > region.br + tol:
            raise PreconditionError(f"rect {r.id} exceeds the region")
    return _cond([(r.id, r.len, r.br) for r in rects], region.len, region.br, tol)


def _cond(L, u, v, tol):
    if not L:
        return True
    a = max(r[1] for r in L)
    b = max(r[2] for r in L)
    if a > u + tol or b > v + tol:
        return False
    area = sum(r[1] * r[2] for r in L)
    return 2.0 * area <= u * v - _pos(2 * a - u) * _pos(2 * b - v) + tol


def _min_width(a, b, area, v):
    # Smallest width u for which a set with these aggregates meets the
    # condition in a u-by-v box. The bound is increasing in u.
    d = _pos(2 * b - v)
    if d <= 0.0:
        return max(a, 2 * area / v)
    narrow = max(a, (2 * area + 2 * a * d) / (v + d))
    if narrow < 2 * a:
        return narrow
    return max(2 * a, 2 * area / v)


_SPLIT_KEYS = (
    lambda r: (-r[1], r[0]),
    lambda r: (-r[1] * r[2], r[0]),
    lambda r: (-r[2], r[0]),
    lambda r: (r[1], r[0]),
)


def _split(L, u, v, tol):
    """A partition into a left and right box that both meet the condition."""
    n = len(L)
    for key in _SPLIT_KEYS:
        s = sorted(L, key=key)
        pa, pb, ps = [], [], []
        ma = mb = area = 0.0
        for r in s:
            ma = max(ma, r[1])
            mb = max(mb, r[2])
            area += r[1] * r[2]
            pa.append(ma)
            pb.append(mb)
            ps.append(area)
        sa = [0.0] * (n + 1)
        sb = [0.0] * (n + 1)
        ss = [0.0] * (n + 1)
        for i in range(n - 1, -1, -1):
            sa[i] = max(sa[i + 1], s[i][1])
            sb[i] = max(sb[i + 1], s[i][2])
            ss[i] = ss[i + 1] + s[i][1] * s[i][2]
        for k in range(1, n):
            left = _min_width(pa[k - 1], pb[k - 1], ps[k - 1], v)
            right = _min_width(sa[k], sb[k], ss[k], v)
            if left + right <= u + tol:
                return s[:k], min(left, u), s[k:]
    return None


def _flip(L):
    return [(r[0], r[2], r[1]) for r in L]


def _shelf(L, u, v, tol):
    order = sorted(L, key=lambda r: (-r[2], r[0]))
    out = {}
    x = y = 0.0
    shelf = None
    for r in order:
        if shelf is None:
            shelf = r[2]
        elif x + r[1] > u + tol:
            y += shelf
            x = 0.0
            shelf = r[2]
        if y + r[2] > v + tol or x + r[1] > u + tol:
            return None
        out[r[0]] = (x, y)
        x += r[1]
    return out


def _bottom_left(L, u, v, tol, key):
    placed = []
    out = {}
    for r in sorted(L, key=key):
        cands = {(0.0, 0.0)}
        for (px, py, pw, pb) in placed:
            cands.add((px + pw, py))
            cands.add((px, py + pb))
            cands.add((px + pw, 0.0))
            cands.add((0.0, py + pb))
        spot = None
        for cx, cy in sorted(cands, key=lambda c: (c[1], c[0])):
            if cx + r[1] > u + tol or cy + r[2] > v + tol:
                continue
            if all(min(cx + r[1], px + pw) - max(cx, px) <= tol or min(cy + r[2], py + pb) - max(cy, py) <= tol
                   for (px, py, pw, pb) in placed):
                spot = (cx, cy)
                break
        if spot is None:
            return None
        placed.append((spot[0], spot[1], r[1], r[2]))
        out[r[0]] = spot
    return out


def _fallback(L, u, v, tol):
    got = _shelf(L, u, v, tol)
    if got is not None:
        return got
    got = _shelf(_flip(L), v, u, tol)
    if got is not None:
        return {k: (p[1], p[0]) for k, p in got.items()}
    for key in (lambda r: (-r[1] * r[2], r[0]), lambda r: (-r[2], -r[1], r[0]), lambda r: (-r[1], -r[2], r[0])):
        got = _bottom_left(L, u, v, tol, key)
        if got is not None:
            return got
    return None


def _steinberg_node(L, u, v, tol):
    """One reduction step for a set that meets the condition in a u-by-v box.

    Returns (fixed placements relative to the box, list of sub-tasks
    (L', dx, dy, u', v')), or None when no step applies.
    """
    if len(L) == 1:
        return {L[0][0]: (0.0, 0.0)}, []
    # Peel the widest rect to the bottom when it spans half the width and
    # nothing else is too tall for what is left above it. The condition is
    # inherited by the smaller box.
    wide = max(L, key=lambda r: (r[1], r[2], -r[0]))
    if wide[1] >= u / 2 - tol:
        rest = [r for r in L if r is not wide]
        if max(r[2] for r in rest) <= v - wide[2] + tol:
            return {wide[0]: (0.0, 0.0)}, [(rest, 0.0, wide[2], u, v - wide[2])]
    tall = max(L, key=lambda r: (r[2], r[1], -r[0]))
    if tall[2] >= v / 2 - tol:
        rest = [r for r in L if r is not tall]
        if max(r[1] for r in rest) <= u - tall[1] + tol:
            return {tall[0]: (0.0, 0.0)}, [(rest, tall[1], 0.0, u - tall[1], v)]
    # A rect that is both widest and tallest and at least half of each side
    # goes to the corner; everything else shares the two arms of the L.
    if wide is tall and wide[1] >= u / 2 - tol and wide[2] >= v / 2 - tol:
        a1, b1 = wide[1], wide[2]
        rest = [r for r in L if r is not wide]
        right_only = [r for r in rest if r[2] > v - b1 + tol]
        top_only = [r for r in rest if r[1] > u - a1 + tol]
        free = sorted((r for r in rest if r[2] <= v - b1 + tol and r[1] <= u - a1 + tol),
                      key=lambda r: (-r[1] * r[2], r[0]))
        for right_box, top_box in (((u - a1, v), (a1, v - b1)), ((u - a1, b1), (u, v - b1))):
            for k in range(len(free) + 1):
                gr = right_only + free[:k]
                gt = top_only + free[k:]
                if _cond(gr, *right_box, tol) and _cond(gt, *top_box, tol):
                    subs = []
                    if gr:
                        subs.append((gr, a1, 0.0) + right_box)
                    if gt:
                        subs.append((gt, 0.0, b1) + top_box)
                    return {wide[0]: (0.0, 0.0)}, subs
    got = _split(L, u, v, tol)
    if got is not None:
        g1, u1, g2 = got
        return {}, [(g1, 0.0, 0.0, u1, v), (g2, u1, 0.0, u - u1, v)]
    got = _split(_flip(L), v, u, tol)
    if got is not None:
        g1, v1, g2 = got
        return {}, [(_flip(g1), 0.0, 0.0, u, v1), (_flip(g2), 0.0, v1, u, v - v1)]
    got = _fallback(L, u, v, tol)
    if got is not None:
        return got, []
    return None


def steinberg_pack(region, rects):
    """Place every rect inside ``region``; requires ``steinberg_condition``."""
    if not steinberg_condition(region, rects):
        raise PreconditionError("Steinberg condition fails; shrink the set (2 a(S) too large)")
    tol = tol_for(max(region.len, region.br))
    out = []
    tasks = [([(r.id, r.len, r.br) for r in rects], region.x0, region.y0, region.len, region.br)]
    while tasks:
        L, x0, y0, u, v = tasks.pop()
        if not L:
            continue
        step = _steinberg_node(L, u, v, tol)
        if step is None:
            raise PackingError(f"Steinberg recursion stuck on {len(L)} rects in {u}x{v}")
        fixed, subs = step
        for rid, (x, y) in fixed.items():
            out.append(RectPlacement(rid, x0 + x, y0 + y))
        for (sl, dx, dy, su, sv) in reversed(subs):
            tasks.append((sl, x0 + dx, y0 + dy, su, sv))
    out.sort(key=lambda pl: pl.id)
    return out


# -- stacking ----------------------------------------------------------------

_AXES = {"x": 0, "w": 0, "y": 1, "d": 1, "z": 2, "h": 2}


def stack_pack(box, items, axis="z"):
    """Stack along ``axis`` in input order. Returns (placements, unpacked ids)."""
    k = _AXES[axis]
    size = box.dims
    tol = tol_for(max(size))
    for it in items:
        dims = (it.w, it.d, it.h)
        for j in range(3):
            if j != k and dims[j] > size[j] + tol:
                raise PreconditionError(f"item {it.id} does not fit the stack cross-section")
    out = []
    off = 0.0
    for n, it in enumerate(items):
        dims = (it.w, it.d, it.h)
        if off + dims[k] > size[k] + tol:
            return out, [q.id for q in items[n:]]
        pos = [0.0, 0.0, 0.0]
        pos[k] = off
        out.append(Placement(it.id, IDENTITY, box.x0 + pos[0], box.y0 + pos[1], box.z0 + pos[2]))
        off += dims[k]
    return out, []


# -- pack-sheets -------------------------------------------------------------

def pack_sheets(region, rects, delta):
    """Stack long rects bottom-left, then stand the rest up from the top right."""
    ell, b = region.len, region.br
    tol = tol_for(max(ell, b))
    if ell < b - tol:
        raise PreconditionError("region must satisfy l >= b")
    for r in rects:
        if r.len < ell / 2 - tol:
            raise PreconditionError(f"rect {r.id}: length < l/2")
        if r.len > ell + tol:
            raise PreconditionError(f"rect {r.id}: length exceeds l")
        if r.br > delta * b + tol:
            raise PreconditionError(f"rect {r.id}: breadth > delta*b")
    area = sum(r.len * r.br for r in rects)
    if area > ell * b - ell * ell / 4 - 3 * delta * b * b + tol:
        raise PreconditionError("total area exceeds l*b - l^2/4 - 3*delta*b^2")
    order = sorted(rects, key=lambda r: (-r.len, r.id))
    out = []
    stacked = []
    y = 0.0
    n = 0
    while n < len(order) and y + order[n].br <= b + tol:
        r = order[n]
        out.append(RectPlacement(r.id, region.x0, region.y0 + y))
        stacked.append((y, r.len, r.br))
        y += r.br
        n += 1
    if n < len(order) and b <= ell / 2 + tol:
        raise PackingError("stack overflow in the flat case of pack_sheets")
    right = ell
    for r in order[n:]:
        x = right - r.br
        bottom = b - r.len
        if x < -tol or bottom < -tol:
            raise PackingError(f"pack_sheets could not stand rect {r.id}")
        for sy, slen, sbr in stacked:
            if sy < b - tol and sy + sbr > bottom + tol and slen > x + tol:
                raise PackingError(f"pack_sheets could not stand rect {r.id}")
        out.append(RectPlacement(r.id, region.x0 + x, region.y0 + bottom, True))
        right = x
    return out
