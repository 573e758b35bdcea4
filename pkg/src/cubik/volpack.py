"""Layered volume packers for thin items, with and without rotation."""

import math
from dataclasses import dataclass, field

from .geometry import (
    Box3D, Cuboid, Placement, PreconditionError, Rect, Region2D, IDENTITY, tag_for, tol_for,
)
from .subroutines import pack_sheets, steinberg_pack


@dataclass
class LayeredPacking:
    """Layers bottom-up; placements inside a layer have z relative to the layer."""

    layers: list = field(default_factory=list)  # (z offset, height, [Placement])

    @property
    def height(self):
        return sum(h for _, h, _ in self.layers)

    def placements(self, z0=0.0, limit=None):
        """Flattened placements of the layers that fit below ``limit``."""
        out = []
        for z, h, pls in self.layers:
            if limit is not None and z + h > limit + tol_for(limit):
                break
            for pl in pls:
                out.append(Placement(pl.item_id, pl.orient, pl.x, pl.y, z0 + z))
        return out


def _classes(w, d, items):
    tol = tol_for(max(w, d))
    third = w * d / 6
    sw1, sw2, sd1, sd2 = [], [], [], []
    for it in items:
        if it.w > w + tol or it.d > d + tol:
            raise PreconditionError(f"item {it.id} exceeds the base")
        small = it.w * it.d <= third + tol * tol
        if it.w <= w / 2 + tol:
            (sw1 if small else sw2).append(it)
        elif it.d <= d / 2 + tol:
            (sd1 if small else sd2).append(it)
        else:
            raise PreconditionError(f"item {it.id} has w > w/2 and d > d/2")
    return sw1, sw2, sd1, sd2


def _steinberg_layers(w, d, items, x0, y0):
    region = Region2D(w, d, x0, y0)
    half = w * d / 2 + tol_for(max(w, d)) ** 2
    order = sorted(items, key=lambda it: (-it.h, it.id))
    out = []
    n = 0
    while n < len(order):
        area = 0.0
        group = []
        while n < len(order) and area + order[n].w * order[n].d <= half:
            area += order[n].w * order[n].d
            group.append(order[n])
            n += 1
        placed = steinberg_pack(region, [Rect(it.id, it.w, it.d) for it in group])
        out.append((group[0].h, [Placement(pl.id, IDENTITY, pl.x, pl.y, 0.0) for pl in placed]))
    return out


def _paired_layers(items, along_x, x0, y0):
    order = sorted(items, key=lambda it: (-it.h, it.id))
    out = []
    for n in range(0, len(order), 2):
        first = order[n]
        pls = [Placement(first.id, IDENTITY, x0, y0, 0.0)]
        if n + 1 < len(order):
            nxt = order[n + 1]
            if along_x:
                pls.append(Placement(nxt.id, IDENTITY, x0 + first.w, y0, 0.0))
            else:
                pls.append(Placement(nxt.id, IDENTITY, x0, y0 + first.d, 0.0))
        out.append((first.h, pls))
    return out


def layers_pack(base, items, x0=0.0, y0=0.0):
    """Pack items with w <= W/2 or d <= D/2 in layers on a W x D base.

    Total height is at most 4 h_max + 3 v(S) / (W D).
    """
    w, d = base
    sw1, sw2, sd1, sd2 = _classes(w, d, items)
    raw = (_steinberg_layers(w, d, sw1, x0, y0) + _paired_layers(sw2, True, x0, y0)
           + _steinberg_layers(w, d, sd1, x0, y0) + _paired_layers(sd2, False, x0, y0))
    lp = LayeredPacking()
    z = 0.0
    for h, pls in raw:
        lp.layers.append((z, h, pls))
        z += h
    return lp


def vol_pack_3d(box, items, eps):
    """Layers of Steinberg packings stacked in ``box``.

    Everything is placed when v(T) <= (1/3 - 2 eps) v(B). Otherwise the layers
    that fit are kept and the rest returned as unpacked ids.
    """
    tol = tol_for(max(box.dims))
    for it in items:
        if it.w > box.w + tol or it.d > box.d + tol:
            raise PreconditionError(f"item {it.id} exceeds the box base")
        if it.h > eps * box.h + tol:
            raise PreconditionError(f"item {it.id}: height exceeds eps*h_B")
    lp = layers_pack((box.w, box.d), items, box.x0, box.y0)
    placed = lp.placements(box.z0, limit=box.h)
    got = {pl.item_id for pl in placed}
    return placed, [it.id for it in items if it.id not in got]


def _ceil_to(x, q):
    return math.ceil(x / q - 1e-9) * q


def _floor_to(x, q):
    return math.floor(x / q + 1e-9) * q


@dataclass(frozen=True)
class ContainerBox:
    """A region produced by a packer, described in global coordinates."""

    kind: str
    box: Box3D
    axis: str = "z"


def thin_up(item):
    """Dimensions with the smallest side on z and w >= d."""
    a, b, c = sorted(item.dims if hasattr(item, "dims") else (item.w, item.d, item.h), reverse=True)
    return (a, b, c)


def vol_pack_3dr(cube, items, eps):
    """Rotational volume packer for a cube of side w.

    Returns (placements, unpacked ids, case label, container boxes). All of
    ``items`` is placed when v(T) <= (7/24 - 5 eps) w^3.
    """
    w = cube.w
    tol = tol_for(w)
    if abs(cube.d - w) > tol or abs(cube.h - w) > tol:
        raise PreconditionError("box must be a cube")
    if 7 / 24 - 5 * eps <= 0:
        raise PreconditionError("nonpositive volume budget: eps >= 7/120")
    q = eps * eps * w
    oriented = []
    for it in items:
        dims = thin_up(it)
        if dims[0] > w + tol or dims[2] > q + tol:
            raise PreconditionError(f"item {it.id}: no orientation with h <= eps^2 w")
        oriented.append((it, dims))
    big = [(it, dims) for it, dims in oriented if dims[0] > w / 2 + tol and dims[1] > w / 2 + tol]
    big_ids = {it.id for it, _ in big}
    small = [(it, dims) for it, dims in oriented if it.id not in big_ids]
    tags = {it.id: tag_for(it, dims) for it, dims in oriented}

    lp = layers_pack((w, w), [Cuboid(it.id, *dims) for it, dims in small], cube.x0, cube.y0)
    # Reserve 2 eps w above the layers, then snap down to the eps^2 w grid.
    h_s = min(w, _floor_to(lp.height + 2 * eps * w, q))
    placed = [Placement(pl.item_id, tags[pl.item_id], pl.x, pl.y, pl.z)
              for pl in lp.placements(cube.z0, limit=h_s)]
    v_small = sum(it.w * it.d * it.h for it, _ in small)
    boxes = [ContainerBox("Steinberg", Box3D(w, w, h_s, cube.x0, cube.y0, cube.z0))] if h_s > 0 else []
    room = w - h_s
    if v_small >= (1 / 6 - 3 * eps) * w ** 3 - tol:
        case = "case1"
        big.sort(key=lambda t: (-t[1][0], t[0].id))
        z = 0.0
        for it, dims in big:
            if z + dims[2] > room + tol:
                break
            placed.append(Placement(it.id, tags[it.id], cube.x0, cube.y0, cube.z0 + h_s + z))
            z += dims[2]
        if z > 0:
            boxes.append(ContainerBox("Stack", Box3D(w, w, min(room, _ceil_to(z, q)), cube.x0, cube.y0, cube.z0 + h_s)))
    else:
        case = "case2"
        h_l = min(room, _ceil_to(w - h_s - eps * w, q))
        if big and h_l > tol:
            rects = [Rect(it.id, dims[0], dims[2]) for it, dims in big]
            delta = max(r.br for r in rects) / h_l
            budget = w * h_l - w * w / 4 - 3 * delta * h_l * h_l
            keep, area = [], 0.0
            for r in rects:
                if area + r.len * r.br <= budget + tol:
                    keep.append(r)
                    area += r.len * r.br
            if keep:
                region = Region2D(w, h_l, cube.x0, cube.z0 + h_s)
                lookup = {it.id: (it, dims) for it, dims in big}
                for pl in pack_sheets(region, keep, delta):
                    it, dims = lookup[pl.id]
                    if pl.rotated:
                        rot = (dims[2], dims[1], dims[0])
                        placed.append(Placement(it.id, tag_for(it, rot), pl.x, cube.y0, pl.y))
                    else:
                        placed.append(Placement(it.id, tags[it.id], pl.x, cube.y0, pl.y))
                boxes.append(ContainerBox("LCont", Box3D(w, w, h_l, cube.x0, cube.y0, cube.z0 + h_s), "y"))
    got = {pl.item_id for pl in placed}
    return placed, [it.id for it in items if it.id not in got], case, boxes

