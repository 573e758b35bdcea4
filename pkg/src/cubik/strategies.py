"""Constructive packing strategies and the best-of portfolio.

Strategies work on items scaled to a unit knapsack and scale the result back.
Each returns a ``StrategyResult`` holding the solution, the containers it
declared and a label of the branch that produced it.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .classify import classify_items
from .containers import Container, _perm, check_container_layout, pack_into_container, placement_inside
from .gap import build_gap_instance, solve_gap_exact, solve_gap_greedy
from .geometry import (
    Box3D, CubikError, Cuboid, PackingError, Placement, PreconditionError, Rect, Region2D, IDENTITY,
    make_solution, orientation_tags, tag_for, tol_for, validate_packing,
)
from .subroutines import nfdh_2d, pack_sheets
from .volpack import layers_pack, thin_up, vol_pack_3d, vol_pack_3dr


class StrategySkipped(CubikError):
    """A strategy does not apply to this instance."""


class Piece(NamedTuple):
    """An item in a chosen orientation, scaled to the unit knapsack."""

    id: int
    w: float
    d: float
    h: float
    p: object
    tag: str = IDENTITY

    @property
    def volume(self):
        return self.w * self.d * self.h


@dataclass
class StrategyResult:
    solution: object
    containers: list = field(default_factory=list)
    case: str = ""


# -- helpers -----------------------------------------------------------------

def _pieces(items, side):
    return [Piece(it.id, it.w / side, it.d / side, it.h / side, it.p) for it in items]


def _thin_pieces(items, side):
    out = []
    for it in items:
        dims = thin_up(it)
        out.append(Piece(it.id, dims[0] / side, dims[1] / side, dims[2] / side, it.p, tag_for(it, dims)))
    return out


def _ceil_to(x, q):
    return math.ceil(x / q - 1e-9) * q


def _floor_to(x, q):
    return math.floor(x / q + 1e-9) * q


def _density(pc):
    return float(pc.p) / pc.volume


def _volume_prefix(pieces, budget):
    order = sorted(pieces, key=lambda pc: (-_density(pc), pc.id))
    out, vol = [], 0.0
    for pc in order:
        if vol + pc.volume > budget + 1e-12:
            break
        out.append(pc)
        vol += pc.volume
    return out


def _finish(name, case, placements, containers, items, side):
    scaled = [Placement(pl.item_id, pl.orient, pl.x * side, pl.y * side, pl.z * side) for pl in placements]
    conts = [Container(c.kind, c.w * side, c.d * side, c.h * side, c.x0 * side, c.y0 * side, c.z0 * side,
                       c.axis, c.eps) for c in containers]
    sol = make_solution(scaled, items, f"{name}/{case}" if case else name)
    return StrategyResult(sol, conts, case)


class _Frame:
    """Maps a canonical frame (building along z) onto ``box`` along ``axis``."""

    def __init__(self, box, axis):
        self.box = box
        self.perm = _perm("Stack", axis)
        self.axis = axis
        self.dims = tuple(box.dims[k] for k in self.perm)

    def canon(self, pc):
        g = (pc.w, pc.d, pc.h)
        return tuple(g[k] for k in self.perm)

    def place(self, pc, c):
        g = [0.0, 0.0, 0.0]
        for k in range(3):
            g[self.perm[k]] = c[k]
        o = self.box.origin
        return Placement(pc.id, pc.tag, o[0] + g[0], o[1] + g[1], o[2] + g[2])

    def container(self, kind, z0, h, eps):
        W, D, _ = self.dims
        lo = [0.0, 0.0, 0.0]
        size = [0.0, 0.0, 0.0]
        for k, (a, n) in enumerate(((0.0, W), (0.0, D), (z0, h))):
            lo[self.perm[k]] = a
            size[self.perm[k]] = n
        o = self.box.origin
        return Container(kind, size[0], size[1], size[2], o[0] + lo[0], o[1] + lo[1], o[2] + lo[2],
                         self.axis, eps)


def _steinberg_then_stack(frame, small, hs, big, hstack, eps, enlarge=True, tight=False):
    """Layers of ``small`` in [0, hs], then a stack of ``big`` by profit/height.

    With ``enlarge`` the Steinberg part grows to the height its layers need
    (taken from the stack) instead of failing. With ``tight`` both containers
    shrink to the eps^2 multiple their contents use.
    """
    W, D, H = frame.dims
    tol = tol_for(H)
    q = eps * eps * H
    lookup = {pc.id: pc for pc in small + big}
    lp = layers_pack((W, D), [Cuboid(pc.id, *frame.canon(pc)) for pc in small])
    if small and lp.height > hs + tol:
        if not enlarge:
            raise PackingError("thin items do not fit the Steinberg height")
        total = hs + hstack
        hs = min(H, _ceil_to(lp.height, q))
        hstack = max(0.0, min(total, H) - hs)
    elif tight:
        hs = min(hs, _ceil_to(lp.height, q)) if small else 0.0
    out = [frame.place(lookup[pl.item_id], (pl.x, pl.y, pl.z)) for pl in lp.placements(0.0, limit=hs)]
    conts = []
    if small and hs > tol:
        conts.append(frame.container("Steinberg", 0.0, hs, eps))
    z = 0.0
    order = sorted(big, key=lambda pc: (-float(pc.p) / frame.canon(pc)[2], pc.id))
    for pc in order:
        h = frame.canon(pc)[2]
        if z + h > hstack + tol:
            break
        out.append(frame.place(pc, (0.0, 0.0, hs + z)))
        z += h
    if tight:
        hstack = min(hstack, _ceil_to(z, q))
    if z > 0 and hstack > tol:
        conts.append(frame.container("Stack", hs, hstack, eps))
    return out, conts, hs + (hstack if z > 0 else 0.0)


# -- strategies --------------------------------------------------------------

def stack_singletons(pieces, box=None, limit=None, options=None, eps=0.1):
    """Each item in its own Stack container, placed by extreme-point first fit.

    Pieces are tried by profit. ``options`` maps an id to the (tag, dims)
    orientations allowed for it; by default only the piece's own.
    """
    box = box or Box3D(1.0, 1.0, 1.0)
    tol = tol_for(max(box.dims))
    order = sorted(pieces, key=lambda pc: (-pc.p, pc.id))
    points = [box.origin]
    lo = np.empty((0, 3))
    hi = np.empty((0, 3))
    out, conts = [], []
    for pc in order:
        if limit is not None and len(out) >= limit:
            break
        opts = (options or {}).get(pc.id) or [(pc.tag, (pc.w, pc.d, pc.h))]
        done = False
        for pt in sorted(points, key=lambda p: (p[2], p[1], p[0])):
            for tag, dims in opts:
                qhi = tuple(pt[k] + dims[k] for k in range(3))
                if any(qhi[k] > box.origin[k] + box.dims[k] + tol for k in range(3)):
                    continue
                if not _kernels.fits_free(lo, hi, pt, qhi, tol):
                    continue
                out.append(Placement(pc.id, tag, *pt))
                conts.append(Container("Stack", *dims, *pt, axis="z", eps=eps))
                lo = np.vstack([lo, pt])
                hi = np.vstack([hi, qhi])
                points.remove(pt)
                for k in range(3):
                    nxt = list(pt)
                    nxt[k] = qhi[k]
                    points.append(tuple(nxt))
                done = True
                break
            if done:
                break
    return out, conts


def _rotations(items, side):
    return {it.id: [(tag, tuple(x / side for x in dims)) for tag, dims in orientation_tags(it, True)]
            for it in items}


def split_stack_steinberg(box, pieces, eps, axis="z", strict=False):
    """Split ``box`` into a Steinberg container below and a Stack above.

    Items with both base sides above half of the box base go to the stack,
    the rest to the Steinberg container. Returns (placements, containers, case).
    """
    frame = _Frame(box, axis)
    W, D, H = frame.dims
    tol = tol_for(max(W, D, H))
    vol = 0.0
    for pc in pieces:
        c = frame.canon(pc)
        if c[0] > W + tol or c[1] > D + tol or c[2] > H + tol:
            raise PreconditionError(f"item {pc.id} does not fit the box")
        if strict and c[2] > eps ** 4 * H + tol:
            raise PreconditionError(f"item {pc.id}: height exceeds eps^4")
        vol += pc.volume
    if vol > box.volume / 4 + tol:
        raise PreconditionError("v(T) > v(B)/4")
    big = [pc for pc in pieces if frame.canon(pc)[0] > W / 2 + tol and frame.canon(pc)[1] > D / 2 + tol]
    ids = {pc.id for pc in big}
    small = [pc for pc in pieces if pc.id not in ids]
    q = eps * eps * H
    vs = sum(pc.volume for pc in small)
    hs = min(H, _ceil_to(3 * (1 + 7 * eps * eps) * vs / (W * D) + eps * eps * H, q)) if small else 0.0
    out, conts, _ = _steinberg_then_stack(frame, small, hs, big, H - hs, eps, enlarge=not strict)
    case = "stack+steinberg" if big and small else ("steinberg" if small else "stack")
    return out, conts, case


def stack_and_stein(box, pieces, eps, v1=None, tight=False):
    """Stack of I1-long items over a Steinberg container of I1-short ones.

    Heights follow the volume of the class: ``v1`` defaults to the volume of
    ``pieces``. Returns (placements, containers, case, used height).
    """
    frame = _Frame(box, "z")
    W, D, H = frame.dims
    tol = tol_for(H)
    big = [pc for pc in pieces if pc.w > W / 2 + tol and pc.d > D / 2 + tol]
    ids = {pc.id for pc in big}
    small = [pc for pc in pieces if pc.id not in ids]
    v1 = sum(pc.volume for pc in pieces) if v1 is None else v1
    v1s = sum(pc.volume for pc in small)
    q = eps * eps * H
    if v1 <= 2 * eps:
        h = min(8 * eps * H, H / 2)
        hs, hstack, case = h, h, "thin"
    elif v1 - v1s > eps:
        hs = min(H, _ceil_to(3 * (1 + 7 * eps * eps) * v1s + eps * eps * H, q))
        hstack = max(0.0, _floor_to(3 * v1, q) - hs)
        case = "case1"
    else:
        # Drop the least profitable group of volume about 8 eps^2.
        order = sorted(small, key=lambda pc: (-_density(pc), pc.id))
        groups, cur, vol = [], [], 0.0
        for pc in order:
            if cur and vol + pc.volume > 8 * eps * eps:
                groups.append(cur)
                cur, vol = [], 0.0
            cur.append(pc)
            vol += pc.volume
        if cur:
            groups.append(cur)
        if len(groups) > 1:
            worst = min(range(len(groups)), key=lambda g: (sum(pc.p for pc in groups[g]), -g))
            small = [pc for g, grp in enumerate(groups) if g != worst for pc in grp]
        hs = min(H, _ceil_to(max(3 * v1s - 3 * eps * eps, q), q))
        hstack = max(0.0, _floor_to(3 * v1, q) - hs)
        case = "case2"
    hstack = min(hstack, H - hs)
    out, conts, used = _steinberg_then_stack(frame, small, hs, big, hstack, eps, tight=tight)
    return out, conts, case, used


def strat_singletons(instance, eps=None, mu=None, only_large=True):
    side = instance.side
    eps = instance.params.eps if eps is None else eps
    mu = instance.params.mu_value if mu is None else mu
    items = instance.items
    if only_large:
        cls = classify_items(items, mu, side)
        keep = set(cls["L"])
        items = [it for it in items if it.id in keep]
    opts = _rotations(items, side) if instance.allow_rotation else None
    out, conts = stack_singletons(_pieces(items, side), options=opts, eps=eps)
    return _finish("singletons", "L" if only_large else "all", out, conts, instance.items, side)


def strat_split_stack_steinberg(box, items, eps, axis="z", strict=False, side=1.0, all_items=None):
    """Public wrapper: ``box`` and ``items`` in knapsack units."""
    unit = Box3D(box.w / side, box.d / side, box.h / side, box.x0 / side, box.y0 / side, box.z0 / side)
    out, conts, case = split_stack_steinberg(unit, _pieces(items, side), eps, axis, strict)
    return _finish("split-stack-steinberg", case, out, conts, all_items or items, side)


_AXIS_OF = {"I1": "z", "I2": "x", "I3": "y"}


def strat_simple5(instance, eps=None, mu=None):
    side = instance.side
    eps = instance.params.eps if eps is None else eps
    mu = instance.params.mu_value if mu is None else mu
    cls = classify_items(instance.items, mu, side)
    pieces = {pc.id: pc for pc in _pieces(instance.items, side)}
    best = None
    cands = []
    ls = [pieces[i] for i in cls["L"]]
    if ls:
        out, conts = stack_singletons(ls, eps=eps)
        cands.append(("L", out, conts))
    unit = Box3D(1.0, 1.0, 1.0)
    for name in ("I1", "I2", "I3"):
        group = [pieces[i] for i in cls[name]]
        if not group:
            continue
        prefix = _volume_prefix(group, 0.25)
        try:
            out, conts, case = split_stack_steinberg(unit, prefix, eps, _AXIS_OF[name])
        except (PreconditionError, PackingError):
            continue
        cands.append((f"{name}:{case}", out, conts))
    for case, out, conts in cands:
        res = _finish("simple5", case, out, conts, instance.items, side)
        if best is None or res.solution.profit > best.solution.profit:
            best = res
    return best or _finish("simple5", "empty", [], [], instance.items, side)


def strat_I1_pack(instance, eps=None, mu=None):
    side = instance.side
    eps = instance.params.eps if eps is None else eps
    mu = instance.params.mu_value if mu is None else mu
    cls = classify_items(instance.items, mu, side)
    pieces = {pc.id: pc for pc in _pieces(instance.items, side)}
    i1 = [pieces[i] for i in cls["I1"]]
    i1s = [pieces[i] for i in cls["I1s"]]
    unit = Box3D(1.0, 1.0, 1.0)
    cands = []
    if i1s:
        prefix = _volume_prefix(i1s, 1 / 3 - 2 * eps)
        try:
            out, _ = vol_pack_3d(unit, [Cuboid(pc.id, pc.w, pc.d, pc.h) for pc in prefix], eps)
            cands.append(("steinberg-prefix", out, [Container("Steinberg", 1.0, 1.0, 1.0, eps=eps)]))
        except PreconditionError:
            pass
    v1 = cls.volume["I1"]
    if i1 and v1 <= 1 / 3:
        out, conts, case, _ = stack_and_stein(unit, i1, eps)
        cands.append((f"stack-and-stein:{case}", out, conts))
    if i1 and v1 <= 1 / 4:
        try:
            out, conts, case = split_stack_steinberg(unit, i1, eps)
            cands.append((f"split:{case}", out, conts))
        except (PreconditionError, PackingError):
            pass
    best = None
    for case, out, conts in cands:
        res = _finish("I1-pack", case, out, conts, instance.items, side)
        if best is None or res.solution.profit > best.solution.profit:
            best = res
    return best or _finish("I1-pack", "empty", [], [], instance.items, side)


def strat_combined_fourth(instance, eps=None, mu=None):
    side = instance.side
    eps = instance.params.eps if eps is None else eps
    mu = instance.params.mu_value if mu is None else mu
    cls = classify_items(instance.items, mu, side)
    if cls.volume["I1"] > 1 / 6:
        raise StrategySkipped("v1 > 1/6")
    pieces = {pc.id: pc for pc in _pieces(instance.items, side)}
    i1 = [pieces[i] for i in cls["I1"]]
    unit = Box3D(1.0, 1.0, 1.0)
    if i1:
        bottom, bconts, bcase, used = stack_and_stein(unit, i1, eps, tight=True)
    else:
        bottom, bconts, bcase, used = [], [], "none", eps * eps
    q = eps * eps
    used = min(1.0, _ceil_to(used, q))
    H = 1.0 - used
    cands = []
    if H > tol_for(1.0):
        top = Box3D(1.0, 1.0, H, 0.0, 0.0, used)
        for name, axis in (("S2", "x"), ("S3", "y")):
            group = [pieces[i] for i in cls[name]]
            if not group:
                continue
            prefix = _volume_prefix(group, H / 4)
            try:
                out, conts, case = split_stack_steinberg(top, prefix, eps, axis)
            except (PreconditionError, PackingError):
                continue
            cands.append((f"{bcase}+{name}:{case}", out, conts))
        group = [pieces[i] for i in cls["S"]]
        if group:
            out, conts = stack_singletons(group, top, eps=eps)
            cands.append((f"{bcase}+S:singletons", out, conts))
    if not cands:
        cands.append((bcase, [], []))
    best = None
    for case, out, conts in cands:
        res = _finish("combined-fourth", case, bottom + out, bconts + conts, instance.items, side)
        if best is None or res.solution.profit > best.solution.profit:
            best = res
    return best


def strat_rot_volume(instance, mu=None):
    if not instance.allow_rotation:
        raise StrategySkipped("rotation disabled")
    side = instance.side
    mu = instance.params.mu_value if mu is None else mu
    eps = math.sqrt(mu)
    budget = 7 / 24 - 5 * eps
    if budget <= 0:
        raise StrategySkipped("mu too large for the rotational volume budget")
    cls = classify_items(instance.items, mu, side)
    large = set(cls["L"])
    thin = _thin_pieces([it for it in instance.items if it.id not in large], side)
    prefix = _volume_prefix(thin, budget)
    lookup = {it.id: it for it in instance.items}
    unit_items = [_Unit(lookup[pc.id], side) for pc in prefix]
    out, _, case, boxes = vol_pack_3dr(Box3D(1.0, 1.0, 1.0), unit_items, eps)
    conts = [Container(b.kind, b.box.w, b.box.d, b.box.h, b.box.x0, b.box.y0, b.box.z0,
                       "y" if b.kind == "LCont" else "z", eps) for b in boxes]
    return _finish("rot-volume", case, out, conts, instance.items, side)


class _Unit:
    """An item scaled to the unit knapsack that keeps the original's orientation tags."""

    def __init__(self, item, side):
        self.id = item.id
        self.w, self.d, self.h = item.w / side, item.d / side, item.h / side
        self.p = item.p

    @property
    def dims(self):
        return (self.w, self.d, self.h)


def strat_rot_uniform_density(instance, mu=None):
    if not instance.allow_rotation:
        raise StrategySkipped("rotation disabled")
    side = instance.side
    eps = instance.params.eps
    mu = instance.params.mu_value if mu is None else mu
    cls = classify_items(instance.items, mu, side)
    large = set(cls["L"])
    thin = _thin_pieces([it for it in instance.items if it.id not in large], side)
    sheets = [pc for pc in thin if pc.w > 0.5 and pc.d > 0.5]
    sheet_ids = {pc.id for pc in sheets}
    rest = [pc for pc in thin if pc.id not in sheet_ids]
    lookup = {it.id: it for it in instance.items}
    cands = []
    ls = _pieces([lookup[i] for i in cls["L"]], side)
    if ls:
        out, conts = stack_singletons(ls, options=_rotations([lookup[i] for i in cls["L"]], side), eps=eps)
        cands.append(("L", out, conts))
    if sheets:
        order = sorted(sheets, key=lambda pc: (-float(pc.p) / (pc.w * pc.h), pc.id))
        keep, area = [], 0.0
        for pc in order:
            if area + pc.w * pc.h > 3 / 4 - 3 * mu + 1e-12:
                break
            keep.append(pc)
            area += pc.w * pc.h
        by_id = {pc.id: pc for pc in keep}
        got = pack_sheets(Region2D(1.0, 1.0), [Rect(pc.id, pc.w, pc.h) for pc in keep], mu)
        out = []
        for pl in got:
            pc = by_id[pl.id]
            if pl.rotated:
                a, b, c = thin_up(lookup[pc.id])
                out.append(Placement(pc.id, tag_for(lookup[pc.id], (c, b, a)), pl.x, 0.0, pl.y))
            else:
                out.append(Placement(pc.id, pc.tag, pl.x, 0.0, pl.y))
        cands.append(("sheets", out, [Container("LCont", 1.0, 1.0, 1.0, axis="y", eps=mu)]))
    if rest:
        prefix = _volume_prefix(rest, 1 / 3 - 2 * mu)
        local, _ = vol_pack_3d(Box3D(1.0, 1.0, 1.0), [Cuboid(pc.id, pc.w, pc.d, pc.h) for pc in prefix], mu)
        tags = {pc.id: pc.tag for pc in prefix}
        out = [Placement(pl.item_id, tags[pl.item_id], pl.x, pl.y, pl.z) for pl in local]
        cands.append(("steinberg", out, [Container("Steinberg", 1.0, 1.0, 1.0, eps=mu)]))
    best = None
    for case, out, conts in cands:
        res = _finish("rot-uniform-density", case, out, conts, instance.items, side)
        if best is None or res.solution.profit > best.solution.profit:
            best = res
    return best or _finish("rot-uniform-density", "empty", [], [], instance.items, side)


def strat_tall_shelf(instance, eps=None, mu=None):
    """Items taller than half the knapsack cannot share a column: NFDH on the floor.

    Each packed item gets its own full-height Stack container over its base.
    """
    side = instance.side
    eps = instance.params.eps if eps is None else eps
    tall = [pc for pc in _pieces(instance.items, side) if pc.h > 0.5]
    if not tall:
        raise StrategySkipped("no item is taller than 1/2")
    order = sorted(tall, key=lambda pc: (-float(pc.p) / (pc.w * pc.d), pc.id))
    keep, area = [], 0.0
    for pc in order:
        if area + pc.w * pc.d <= 1.0 + 1e-12:
            keep.append(pc)
            area += pc.w * pc.d
    got, _ = nfdh_2d(Region2D(1.0, 1.0), [Rect(pc.id, pc.w, pc.d) for pc in keep])
    lookup = {pc.id: pc for pc in keep}
    out, conts = [], []
    for rp in got:
        pc = lookup[rp.id]
        out.append(Placement(pc.id, IDENTITY, rp.x, rp.y, 0.0))
        conts.append(Container("Stack", pc.w, pc.d, 1.0, rp.x, rp.y, 0.0, "z", eps))
    return _finish("tall-shelf", "nfdh", out, conts, instance.items, side)


# -- portfolio ---------------------------------------------------------------

STRATEGIES = {
    "singletons": lambda inst: strat_singletons(inst, only_large=False),
    "singletons-L": lambda inst: strat_singletons(inst, only_large=True),
    "simple5": strat_simple5,
    "I1-pack": strat_I1_pack,
    "combined-fourth": strat_combined_fourth,
    "rot-volume": strat_rot_volume,
    "rot-uniform-density": strat_rot_uniform_density,
    "tall-shelf": strat_tall_shelf,
}


@dataclass
class PortfolioConfig:
    strategies: tuple | None = None
    gap: bool = False
    threads: int | None = None
    gap_exact_n: int = 40
    gap_exact_k: int = 12
    node_limit: int = 200_000


@dataclass
class PortfolioReport:
    solution: object
    results: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)


def check_result(instance, res):
    """Violations of a strategy result: packing, container layout and containment."""
    lookup = instance.by_id()
    rep = validate_packing(instance.knapsack, res.solution, lookup, instance.allow_rotation)
    bad = list(rep.violations)
    if not check_container_layout(res.containers, instance.knapsack):
        bad.append("container layout overlaps or leaves the knapsack")
    for pl in res.solution.placements:
        if res.containers and not any(placement_inside(c, pl, lookup[pl.item_id]) for c in res.containers):
            bad.append(f"item {pl.item_id} lies outside every container")
    return bad


def gap_reoptimize(instance, res, cfg):
    """Reassign all items to ``res``'s containers by GAP and repack each container."""
    conts = res.containers
    if not conts:
        return None
    g = build_gap_instance(conts, instance.items, instance.allow_rotation)
    if g.n <= cfg.gap_exact_n and g.k <= cfg.gap_exact_k:
        sol = solve_gap_exact(g, node_limit=cfg.node_limit)
    else:
        sol = solve_gap_greedy(g)
    lookup = instance.by_id()
    out = []
    for c, ids in zip(conts, sol.groups(g)):
        if not ids:
            continue
        try:
            placed, _ = pack_into_container(c, [lookup[i] for i in ids], instance.allow_rotation)
        except (PreconditionError, PackingError):
            continue
        out.extend(placed)
    sol = make_solution(out, lookup, res.solution.provenance + "+gap")
    return StrategyResult(sol, conts, res.case + "+gap")


def _threads(cfg):
    if cfg.threads is not None:
        return max(1, cfg.threads)
    try:
        return max(1, int(os.environ.get("CUBIK_THREADS", "1")))
    except ValueError:
        return 1


def portfolio_solve(instance, config=None, report=False):
    """Best validated solution over the strategies (and their GAP repacks)."""
    cfg = config or PortfolioConfig()
    names = list(cfg.strategies or STRATEGIES)
    for n in names:
        if n not in STRATEGIES:
            raise PreconditionError(f"unknown strategy {n!r}")

    def run(name):
        try:
            res = STRATEGIES[name](instance)
        except StrategySkipped as exc:
            return name, None, f"skipped: {exc}"
        except (CubikError, ValueError) as exc:
            return name, None, f"failed: {exc}"
        bad = check_result(instance, res)
        if bad:
            return name, None, "invalid: " + "; ".join(bad[:3])
        out = [res]
        if cfg.gap:
            try:
                alt = gap_reoptimize(instance, res, cfg)
            except (CubikError, ValueError):
                alt = None
            if alt is not None and not check_result(instance, alt):
                out.append(alt)
        return name, out, None

    n_threads = _threads(cfg)
    if n_threads > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            runs = list(pool.map(run, names))
    else:
        runs = [run(n) for n in names]
    rep = PortfolioReport(None)
    best = None
    for name, results, err in runs:
        if err is not None:
            rep.failures[name] = err
            continue
        for res in results:
            rep.results[res.solution.provenance] = res
            if best is None or res.solution.profit > best.solution.profit:
                best = res
    if best is None:
        best = StrategyResult(make_solution([], instance.items, "empty"))
    rep.solution = best.solution
    return rep if report else best.solution
