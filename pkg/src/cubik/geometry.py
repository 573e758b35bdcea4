"""Domain types, orientations and the packing validator."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels

TAU = 1e-9

# A tag names which original dimension lands on the x, y and z axis.
ORIENT_TAGS = ("wdh", "whd", "dwh", "dhw", "hwd", "hdw")
IDENTITY = "wdh"
_TAG_INDEX = {t: tuple("wdh".index(c) for c in t) for t in ORIENT_TAGS}


class CubikError(Exception):
    """Base class for library errors."""


class PreconditionError(CubikError, ValueError):
    """A documented precondition of an algorithm does not hold."""


class PackingError(CubikError, RuntimeError):
    """An algorithm could not finish a packing it is supposed to guarantee."""


class UnknownItemError(CubikError, KeyError):
    """A placement references an item id that is not in the instance."""


class LimitExceeded(CubikError, RuntimeError):
    """A configured size or node limit was hit."""


def tol_for(side):
    return TAU * max(1.0, float(side))


@dataclass(frozen=True)
class Item:
    id: int
    w: float
    d: float
    h: float
    p: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("w", "d", "h"):
            if not getattr(self, name) > 0:
                raise PreconditionError(f"item {self.id}: nonpositive dimension {name}")
        if self.p < 0:
            raise PreconditionError(f"item {self.id}: negative profit")

    @property
    def dims(self):
        return (self.w, self.d, self.h)

    @property
    def volume(self):
        return self.w * self.d * self.h


class Cuboid(NamedTuple):
    """An item in a fixed orientation, as handled by the packing primitives."""

    id: int
    w: float
    d: float
    h: float


@dataclass(frozen=True)
class Placement:
    item_id: int
    orient: str
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class Knapsack:
    side: float = 1.0

    def __post_init__(self):
        if not self.side > 0:
            raise PreconditionError("knapsack side must be positive")


@dataclass(frozen=True)
class Params:
    eps: float = 0.1
    mu: float | None = None

    @property
    def mu_value(self):
        return self.mu if self.mu is not None else min(self.eps ** 4, 1e-3)


@dataclass(frozen=True)
class Instance:
    side: float
    items: tuple
    allow_rotation: bool = False
    params: Params = field(default_factory=Params)

    def __post_init__(self):
        Knapsack(self.side)
        seen = set()
        for it in self.items:
            if it.id in seen:
                raise PreconditionError(f"duplicate item id {it.id}")
            seen.add(it.id)
            if max(it.dims) > self.side + tol_for(self.side):
                raise PreconditionError(f"item {it.id}: dimension > side")

    @property
    def knapsack(self):
        return Knapsack(self.side)

    def by_id(self):
        return {it.id: it for it in self.items}


@dataclass(frozen=True)
class PackingSolution:
    placements: tuple = ()
    profit: Fraction = Fraction(0)
    provenance: str = ""


def make_solution(placements, items, provenance=""):
    """Build a solution whose profit is the exact sum over placed items."""
    lookup = items if isinstance(items, dict) else {it.id: it for it in items}
    placements = tuple(sorted(placements, key=lambda pl: pl.item_id))
    profit = sum((lookup[pl.item_id].p for pl in placements), Fraction(0))
    return PackingSolution(placements, profit, provenance)


# -- orientations ------------------------------------------------------------

def orient(item, tag):
    dims = (item.w, item.d, item.h)
    i, j, k = _TAG_INDEX[tag]
    return (dims[i], dims[j], dims[k])


def orientation_tags(item, allow_rotation):
    """Distinct (tag, dims) pairs; one identity pair when rotation is off."""
    if not allow_rotation:
        return [(IDENTITY, (item.w, item.d, item.h))]
    seen = set()
    out = []
    for tag in ORIENT_TAGS:
        dims = orient(item, tag)
        if dims not in seen:
            seen.add(dims)
            out.append((tag, dims))
    return out


def orientations(item, allow_rotation):
    return [dims for _, dims in orientation_tags(item, allow_rotation)]


def tag_for(item, dims):
    """The first tag whose orientation reproduces ``dims`` exactly."""
    for tag in ORIENT_TAGS:
        if orient(item, tag) == tuple(dims):
            return tag
    raise PreconditionError(f"item {item.id}: {dims} is not a permutation of its dimensions")


def compose_tags(outer, inner):
    """Tag equal to applying ``inner`` first and permuting the result by ``outer``."""
    base = (0, 1, 2)
    first = tuple(base[i] for i in _TAG_INDEX[inner])
    final = tuple(first[i] for i in _TAG_INDEX[outer])
    return "".join("wdh"[i] for i in final)


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def placed_boxes(placements, lookup):
    lo = np.empty((len(placements), 3))
    hi = np.empty((len(placements), 3))
    for n, pl in enumerate(placements):
        dims = orient(lookup[pl.item_id], pl.orient)
        lo[n] = (pl.x, pl.y, pl.z)
        hi[n] = (pl.x + dims[0], pl.y + dims[1], pl.z + dims[2])
    return lo, hi


def validate_packing(knapsack, sol, items, allow_rotation, check_profit=True):
    lookup = items if isinstance(items, dict) else {it.id: it for it in items}
    for pl in sol.placements:
        if pl.item_id not in lookup:
            raise UnknownItemError(pl.item_id)
        if pl.orient not in _TAG_INDEX:
            raise UnknownItemError(f"bad orientation tag {pl.orient!r} for item {pl.item_id}")
    side = knapsack.side
    tol = tol_for(side)
    rep = ValidationReport()
    seen = set()
    for pl in sol.placements:
        if pl.item_id in seen:
            rep.violations.append(f"duplicate item {pl.item_id}")
        seen.add(pl.item_id)
        if pl.orient != IDENTITY and not allow_rotation:
            rep.violations.append(f"illegal rotation {pl.orient} of item {pl.item_id}")
    lo, hi = placed_boxes(sol.placements, lookup)
    for n, pl in enumerate(sol.placements):
        if np.any(lo[n] < -tol) or np.any(hi[n] > side + tol):
            rep.violations.append(f"item {pl.item_id} out of bounds")
    for i, j in _kernels.overlap_pairs(lo, hi, tol):
        a, b = sol.placements[i].item_id, sol.placements[j].item_id
        rep.violations.append(f"items {a} and {b} overlap")
    if check_profit:
        total = sum((lookup[i].p for i in seen), Fraction(0))
        if total != sol.profit:
            rep.violations.append(f"profit {sol.profit} differs from placed total {total}")
    return rep


# -- 2D pieces ---------------------------------------------------------------

class Rect(NamedTuple):
    id: int
    len: float
    br: float
    profit: Fraction | None = None


class RectPlacement(NamedTuple):
    id: int
    x: float
    y: float
    rotated: bool = False


@dataclass(frozen=True)
class Region2D:
    len: float
    br: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if not (self.len > 0 and self.br > 0):
            raise PreconditionError("region sides must be positive")


@dataclass(frozen=True)
class Box3D:
    w: float
    d: float
    h: float
    x0: float = 0.0
    y0: float = 0.0
    z0: float = 0.0

    @property
    def volume(self):
        return self.w * self.d * self.h

    @property
    def dims(self):
        return (self.w, self.d, self.h)

    @property
    def origin(self):
        return (self.x0, self.y0, self.z0)


def validate_rects(region, rects, placements, tol=None):
    """Violations of a 2D placement inside ``region`` (empty list when clean)."""
    tol = tol_for(max(region.len, region.br)) if tol is None else tol
    lookup = {r.id: r for r in rects}
    out = []
    lo = np.empty((len(placements), 2))
    hi = np.empty((len(placements), 2))
    seen = set()
    for n, pl in enumerate(placements):
        r = lookup[pl.id]
        if pl.id in seen:
            out.append(f"duplicate rect {pl.id}")
        seen.add(pl.id)
        w, b = (r.br, r.len) if pl.rotated else (r.len, r.br)
        lo[n] = (pl.x, pl.y)
        hi[n] = (pl.x + w, pl.y + b)
        if (pl.x < region.x0 - tol or pl.y < region.y0 - tol
                or pl.x + w > region.x0 + region.len + tol or pl.y + b > region.y0 + region.br + tol):
            out.append(f"rect {pl.id} out of region")
    for i, j in _kernels.overlap_pairs(lo, hi, tol):
        out.append(f"rects {placements[i].id} and {placements[j].id} overlap")
    return out
