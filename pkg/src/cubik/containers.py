"""Typed containers: capacity, admission size and the per-type packer.

Every kind is implemented once in a canonical frame and rotated into place
by an axis permutation ``perm``: canonical axis k is global axis ``perm[k]``.

* Stack and Steinberg containers build along canonical z.
* Area and L-containers ignore canonical y (they pack the x-z face).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import (
    Box3D, Cuboid, Placement, PreconditionError, Rect, Region2D, orient, orientation_tags, tag_for, tol_for,
)
from .subroutines import nfdh_2d, nfdh_3d, pack_sheets, stack_pack
from .volpack import vol_pack_3d

KINDS = ("Stack", "Area", "Volume", "Steinberg", "LCont")
_AXIS = {"x": 0, "y": 1, "z": 2}


def _perm(kind, axis):
    a = _AXIS[axis]
    rest = [k for k in range(3) if k != a]
    if kind in ("Stack", "Steinberg"):
        return (rest[0], rest[1], a)
    if kind in ("Area", "LCont"):
        return (rest[0], a, rest[1])
    return (0, 1, 2)


@dataclass(frozen=True)
class Container:
    """A box region of the knapsack with a packing rule.

    ``axis`` is the stacking direction for Stack and Steinberg containers and
    the ignored direction for Area and L-containers. It defaults to z for the
    former and to y (the depth) for the latter.
    """

    kind: str
    w: float
    d: float
    h: float
    x0: float = 0.0
    y0: float = 0.0
    z0: float = 0.0
    axis: str | None = None
    eps: float = 0.1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown container kind {self.kind!r}")
        if self.axis is None:
            object.__setattr__(self, "axis", "y" if self.kind in ("Area", "LCont") else "z")
        if self.axis not in _AXIS:
            raise PreconditionError(f"unknown axis {self.axis!r}")
        if not (self.w > 0 and self.d > 0 and self.h > 0):
            raise PreconditionError("container dimensions must be positive")
        if self.kind == "LCont":
            cw, _, ch = self.canonical_dims
            if cw < ch - tol_for(cw):
                raise PreconditionError("L-container needs w_C >= h_C")
            if cw * ch - cw * cw / 4 <= 0:
                raise PreconditionError("L-container capacity must be positive (h_C > w_C/4)")

    @property
    def perm(self):
        return _perm(self.kind, self.axis)

    @property
    def dims(self):
        return (self.w, self.d, self.h)

    @property
    def origin(self):
        return (self.x0, self.y0, self.z0)

    @property
    def canonical_dims(self):
        g = self.dims
        return tuple(g[k] for k in self.perm)

    @property
    def volume(self):
        return self.w * self.d * self.h

    def label(self):
        return f"{self.kind}[{self.axis}]@({self.x0:g},{self.y0:g},{self.z0:g}) {self.w:g}x{self.d:g}x{self.h:g}"


def cap(c):
    W, D, H = c.canonical_dims
    if c.kind == "Stack":
        return H
    if c.kind == "Area":
        return W * H
    if c.kind == "Volume":
        return c.volume
    if c.kind == "Steinberg":
        return c.volume / 3
    return W * H - W * W / 4


def _canon(c, dims):
    return tuple(dims[k] for k in c.perm)


def _size(c, cd):
    """Size of an item with canonical dims ``cd``, or None when inadmissible."""
    W, D, H = c.canonical_dims
    tol = tol_for(max(W, D, H))
    e = c.eps
    a, b, h = cd
    if a > W + tol or b > D + tol or h > H + tol:
        return None
    if c.kind == "Stack":
        return h
    if c.kind == "Area":
        return a * h if a <= e * W + tol and h <= e * H + tol else None
    if c.kind == "Volume":
        return a * b * h if a <= e * W + tol and b <= e * D + tol and h <= e * H + tol else None
    if c.kind == "Steinberg":
        if h <= e * H + tol and (a <= W / 2 + tol or b <= D / 2 + tol):
            return a * b * h
        return None
    if a >= W / 2 - tol and b >= D / 2 - tol and h <= e * H + tol:
        return a * h
    return None


def best_orientation(c, item, allow_rotation):
    """(size, tag) of the smallest admissible orientation, or None."""
    best = None
    for tag, dims in orientation_tags(item, allow_rotation):
        s = _size(c, _canon(c, dims))
        if s is not None and (best is None or s < best[0]):
            best = (s, tag)
    return best


def f_C(c, item, allow_rotation=False):
    got = best_orientation(c, item, allow_rotation)
    return None if got is None else got[0]


def _prefix(order, sizes, limit):
    keep, total = [], 0.0
    for it in order:
        if total + sizes[it.id] > limit:
            break
        keep.append(it)
        total += sizes[it.id]
    return keep


def pack_into_container(c, items, allow_rotation=False):
    """Pack ``items`` into ``c`` with the container's own algorithm.

    Returns (placements in global coordinates, dropped ids).
    """
    W, D, H = c.canonical_dims
    tol = tol_for(max(W, D, H))
    e = c.eps
    chosen = {}
    for it in items:
        got = best_orientation(c, it, allow_rotation)
        if got is None:
            raise PreconditionError(f"item {it.id} is inadmissible for {c.kind}")
        chosen[it.id] = got
    sizes = {i: s for i, (s, _) in chosen.items()}
    lookup = {it.id: it for it in items}
    order = sorted(items, key=lambda it: (-float(it.p) / sizes[it.id], it.id))
    canon = {it.id: _canon(c, orient(it, chosen[it.id][1])) for it in items}
    cub = {i: Cuboid(i, *canon[i]) for i in canon}
    box = Box3D(W, D, H)
    rotated = set()
    if c.kind == "Stack":
        local, _ = stack_pack(box, [cub[it.id] for it in order], "z")
        coords = {pl.item_id: (pl.x, pl.y, pl.z) for pl in local}
    elif c.kind == "Area":
        keep = _prefix(order, sizes, (1 - 2 * e) * W * H + tol)
        got, _ = nfdh_2d(Region2D(W, H), [Rect(it.id, cub[it.id].w, cub[it.id].h) for it in keep])
        coords = {pl.id: (pl.x, 0.0, pl.y) for pl in got}
    elif c.kind == "Volume":
        keep = _prefix(order, sizes, (1 - 3 * e) * W * D * H + tol)
        local, _ = nfdh_3d(box, [cub[it.id] for it in keep])
        coords = {pl.item_id: (pl.x, pl.y, pl.z) for pl in local}
    elif c.kind == "Steinberg":
        keep = _prefix(order, sizes, (1 / 3 - 2 * e) * W * D * H + tol)
        local, _ = vol_pack_3d(box, [cub[it.id] for it in keep], e)
        coords = {pl.item_id: (pl.x, pl.y, pl.z) for pl in local}
    else:
        keep = _prefix(order, sizes, W * H - W * W / 4 - 3 * e * H * H + tol)
        # A flat container can have a negative sheet budget; nothing goes in.
        got = pack_sheets(Region2D(W, H), [Rect(it.id, cub[it.id].w, cub[it.id].h) for it in keep], e) if keep else []
        coords = {pl.id: (pl.x, 0.0, pl.y) for pl in got}
        rotated = {pl.id for pl in got if pl.rotated}
    out = []
    for i, cc in coords.items():
        it = lookup[i]
        cdims = canon[i]
        if i in rotated:
            cdims = (cdims[2], cdims[1], cdims[0])
        g = [0.0, 0.0, 0.0]
        pos = [0.0, 0.0, 0.0]
        for k in range(3):
            g[c.perm[k]] = cdims[k]
            pos[c.perm[k]] = cc[k]
        if i in rotated:
            tag = _tag_or_none(it, tuple(g), allow_rotation)
            if tag is None:
                continue
        else:
            tag = chosen[i][1]
        out.append(Placement(i, tag, c.x0 + pos[0], c.y0 + pos[1], c.z0 + pos[2]))
    out.sort(key=lambda pl: pl.item_id)
    placed = {pl.item_id for pl in out}
    return out, [it.id for it in items if it.id not in placed]


def _tag_or_none(item, dims, allow_rotation):
    tag = tag_for(item, dims)
    if not allow_rotation and tag != "wdh":
        return None
    return tag


def container_boxes(containers):
    lo = np.array([c.origin for c in containers], dtype=float).reshape(-1, 3)
    hi = lo + np.array([c.dims for c in containers], dtype=float).reshape(-1, 3)
    return lo, hi


def check_container_layout(containers, knapsack):
    """True iff the containers lie inside the knapsack and do not overlap."""
    if not containers:
        return True
    side = knapsack.side
    tol = tol_for(side)
    lo, hi = container_boxes(containers)
    if np.any(lo < -tol) or np.any(hi > side + tol):
        return False
    return len(_kernels.overlap_pairs(lo, hi, tol, limit=1)) == 0


def placement_inside(c, pl, item):
    dims = orient(item, pl.orient)
    tol = tol_for(max(c.dims))
    for k, (p, o, n) in enumerate(zip((pl.x, pl.y, pl.z), c.origin, c.dims)):
        if p < o - tol or p + dims[k] > o + n + tol:
            return False
    return True
