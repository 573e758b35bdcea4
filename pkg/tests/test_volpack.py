import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import helpers as H
from cubik.geometry import Box3D, Cuboid, Item, PreconditionError
from cubik.volpack import layers_pack, vol_pack_3d, vol_pack_3dr

BOX = Box3D(1.0, 1.0, 1.0)
seeds = st.integers(0, 2 ** 32 - 1).map(np.random.default_rng)


def _clean(box, items, placed):
    return not H.boxes_violations(box.origin, box.dims, H.placements_3d(placed, {c.id: c for c in items}))


def test_layers_bound_example():
    items = [Cuboid(i, 0.5, 0.2, 0.1) for i in range(13)]
    lp = layers_pack((1.0, 1.0), items)
    assert lp.height <= 0.79 + 1e-12
    assert len(lp.placements()) == 13


def test_layers_empty():
    assert layers_pack((1.0, 1.0), []).height == 0


def test_layers_pairs_big_base_items():
    lp = layers_pack((1.0, 1.0), [Cuboid(0, 0.4, 0.6, 0.2), Cuboid(1, 0.4, 0.6, 0.2)])
    assert len(lp.layers) == 1 and lp.height == pytest.approx(0.2)


def test_layers_rejects_wide_and_deep():
    with pytest.raises(PreconditionError):
        layers_pack((1.0, 1.0), [Cuboid(0, 0.6, 0.6, 0.1)])


@given(seeds)
def test_layers_height_bound(rng):
    base, items = H.layers_input(rng)
    lp = layers_pack(base, items)
    bound = 4 * max(it.h for it in items) + 3 * sum(it.w * it.d * it.h for it in items) / (base[0] * base[1])
    assert lp.height <= bound + 1e-9 * max(1, bound)
    placed = lp.placements()
    assert len(placed) == len(items)
    assert _clean(Box3D(base[0], base[1], lp.height), items, placed)
    assert lp.height == pytest.approx(sum(h for _, h, _ in lp.layers))


def test_vol_pack_3d_examples():
    items = [Cuboid(i, 0.5, 0.2, 0.1) for i in range(13)]
    placed, rest = vol_pack_3d(BOX, items, 0.1)
    assert len(placed) == 13 and not rest and _clean(BOX, items, placed)
    with pytest.raises(PreconditionError, match="height exceeds"):
        vol_pack_3d(BOX, [Cuboid(0, 0.2, 0.2, 0.2)], 0.1)
    assert vol_pack_3d(BOX, [], 0.1) == ([], [])


def test_vol_pack_3d_partial_over_budget():
    items = [Cuboid(i, 0.5, 0.9, 0.1) for i in range(40)]
    placed, rest = vol_pack_3d(BOX, items, 0.1)
    assert rest and len(placed) + len(rest) == 40 and _clean(BOX, items, placed)


@given(seeds, st.sampled_from([0.05, 0.1]))
def test_vol_pack_3d_lemma(rng, eps):
    box, items = H.volpack3d_input(rng, eps)
    placed, rest = vol_pack_3d(box, items, eps)
    assert not rest and _clean(box, items, placed)


def _multiple(x, q):
    return abs(x / q - round(x / q)) < 1e-6


def test_vol_pack_3dr_sheets_case():
    items = [Item(i, 0.9, 0.9, 0.0025) for i in range(20)]
    placed, rest, case, boxes = vol_pack_3dr(BOX, items, 0.05)
    assert case == "case2" and not rest and _clean(BOX, items, placed)
    # The 2 eps w slab for small items is reserved even when it stays empty.
    assert [b.kind for b in boxes] == ["Steinberg", "LCont"]


def test_vol_pack_3dr_small_case():
    items = [Item(i, 0.4, 0.4, 0.002) for i in range(60)]
    placed, rest, case, boxes = vol_pack_3dr(BOX, items, 0.05)
    assert not rest and _clean(BOX, items, placed)
    assert [b.kind for b in boxes] == ["Steinberg"]


def test_vol_pack_3dr_errors():
    with pytest.raises(PreconditionError, match="nonpositive volume budget"):
        vol_pack_3dr(BOX, [], 0.06)
    with pytest.raises(PreconditionError, match="cube"):
        vol_pack_3dr(Box3D(1, 1, 0.5), [], 0.05)
    with pytest.raises(PreconditionError):
        vol_pack_3dr(BOX, [Item(0, 0.5, 0.5, 0.5)], 0.05)


@given(seeds, st.sampled_from([0.02, 0.05]))
def test_vol_pack_3dr_lemma(rng, eps):
    cube, items = H.vol3dr_input(rng, eps, max_n=600)
    placed, rest, case, boxes = vol_pack_3dr(cube, items, eps)
    assert not rest and _clean(cube, items, placed)
    q = eps * eps * cube.w
    for b in boxes:
        assert _multiple(b.box.h, q)
        assert b.box.z0 + b.box.h <= cube.z0 + cube.w + 1e-9
    for pl in placed:
        assert any(H.boxes_violations(b.box.origin, b.box.dims, H.placements_3d([pl], {c.id: c for c in items})) == []
                   for b in boxes)
