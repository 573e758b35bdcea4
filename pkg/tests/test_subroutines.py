import numpy as np
import pytest
from hypothesis import given, strategies as st

import helpers as H
from cubik.geometry import Box3D, Cuboid, PreconditionError, Rect, Region2D, validate_rects
from cubik.subroutines import nfdh_2d, nfdh_3d, pack_sheets, stack_pack, steinberg_condition, steinberg_pack

UNIT = Region2D(1.0, 1.0)
BOX = Box3D(1.0, 1.0, 1.0)
seeds = st.integers(0, 2 ** 32 - 1).map(np.random.default_rng)


def _rect_clean(region, rects, placed):
    return not validate_rects(region, rects, placed) and not H.boxes_violations(
        (region.x0, region.y0, 0), (region.len, region.br, 1), H.rect_boxes(placed, {r.id: r for r in rects}))


def _box_clean(box, items, placed):
    return not H.boxes_violations(box.origin, box.dims, H.placements_3d(placed, {c.id: c for c in items}))


# -- nfdh_2d -----------------------------------------------------------------

def test_nfdh_2d_shelves():
    placed, rest = nfdh_2d(UNIT, [Rect(i, 0.4, 0.3) for i in range(3)])
    assert [(p.x, p.y) for p in placed] == [(0, 0), (0.4, 0), (0, 0.3)]
    assert rest == []


def test_nfdh_2d_empty():
    assert nfdh_2d(UNIT, []) == ([], [])


def test_nfdh_2d_full_grid():
    rects = [Rect(i, 0.1, 0.1) for i in range(80)]
    placed, rest = nfdh_2d(UNIT, rects)
    assert len(placed) == 80 and not rest
    assert _rect_clean(UNIT, rects, placed)
    assert max(p.y for p in placed) == pytest.approx(0.7)


def test_nfdh_2d_partial_and_offset():
    region = Region2D(1.0, 0.5, 2.0, 3.0)
    rects = [Rect(i, 0.5, 0.3) for i in range(5)]
    placed, rest = nfdh_2d(region, rects)
    assert len(placed) == 2 and rest == [2, 3, 4]
    assert all(p.x >= 2.0 and p.y >= 3.0 for p in placed)


@given(seeds, st.sampled_from([0.05, 0.1, 0.2]))
def test_nfdh_2d_lemma(rng, eps):
    region, rects = H.nfdh2d_input(rng, eps, max_n=400)
    placed, rest = nfdh_2d(region, rects)
    assert not rest and len(placed) == len(rects)
    assert _rect_clean(region, rects, placed)


@given(seeds)
def test_nfdh_2d_deterministic_and_sorted(rng):
    rects = [Rect(i, *rng.uniform(0.05, 0.5, 2)) for i in range(int(rng.integers(0, 30)))]
    a = nfdh_2d(UNIT, rects)
    assert a == nfdh_2d(UNIT, list(reversed(rects)))
    placed, rest = a
    assert _rect_clean(UNIT, rects, placed)
    assert len(placed) + len(rest) == len(rects)


# -- nfdh_3d -----------------------------------------------------------------

def test_nfdh_3d_cubes():
    items = [Cuboid(i, 0.2, 0.2, 0.2) for i in range(50)]
    placed, rest = nfdh_3d(BOX, items)
    assert len(placed) == 50 and not rest and _box_clean(BOX, items, placed)


def test_nfdh_3d_single():
    placed, rest = nfdh_3d(BOX, [Cuboid(0, 0.9, 0.9, 0.9)])
    assert [(p.x, p.y, p.z) for p in placed] == [(0, 0, 0)] and not rest


def test_nfdh_3d_beyond_budget():
    # 970 cubes of side 0.1 break the volume hypothesis; whatever is placed
    # must still be feasible and nothing may be lost.
    items = [Cuboid(i, 0.1, 0.1, 0.1) for i in range(970)]
    placed, rest = nfdh_3d(BOX, items)
    assert len(placed) + len(rest) == 970
    assert _box_clean(BOX, items, placed)


def test_nfdh_3d_overflow_is_partial():
    items = [Cuboid(i, 0.6, 0.6, 0.4) for i in range(4)]
    placed, rest = nfdh_3d(BOX, items)
    assert len(placed) == 2 and len(rest) == 2


@given(seeds, st.sampled_from([0.05, 0.1, 0.2]))
def test_nfdh_3d_lemma(rng, eps):
    box, items = H.nfdh3d_input(rng, eps, max_n=200)
    placed, rest = nfdh_3d(box, items)
    assert not rest and len(placed) == len(items)
    assert _box_clean(box, items, placed)


# -- Steinberg ---------------------------------------------------------------

def test_steinberg_condition_examples():
    assert steinberg_condition(UNIT, [Rect(0, 0.6, 0.4), Rect(1, 0.2, 0.3)])
    assert not steinberg_condition(UNIT, [Rect(0, 0.9, 0.1), Rect(1, 0.1, 0.9), Rect(2, 0.9, 0.3)])
    assert steinberg_condition(UNIT, [])


def test_steinberg_condition_rejects_oversized():
    with pytest.raises(PreconditionError):
        steinberg_condition(UNIT, [Rect(0, 1.2, 0.1)])


def test_steinberg_pack_examples():
    with pytest.raises(PreconditionError, match="shrink"):
        steinberg_pack(UNIT, [Rect(i, 0.5, 0.5) for i in range(4)])
    two = [Rect(i, 0.5, 0.5) for i in range(2)]
    placed = steinberg_pack(UNIT, two)
    assert len(placed) == 2 and _rect_clean(UNIT, two, placed)
    strips = [Rect(i, 0.25, 0.0625) for i in range(32)]
    placed = steinberg_pack(UNIT, strips)
    assert len(placed) == 32 and _rect_clean(UNIT, strips, placed)


def test_steinberg_pack_big_corner():
    rects = [Rect(0, 0.6, 0.6), Rect(1, 0.35, 0.15), Rect(2, 0.15, 0.35)]
    assert steinberg_condition(UNIT, rects)
    placed = steinberg_pack(UNIT, rects)
    assert len(placed) == 3 and _rect_clean(UNIT, rects, placed)


@given(seeds)
def test_steinberg_lemma(rng):
    region, rects = H.steinberg_input(rng)
    placed = steinberg_pack(region, rects)
    assert len(placed) == len(rects)
    assert _rect_clean(region, rects, placed)


# -- stack -------------------------------------------------------------------

def test_stack_pack_examples():
    placed, rest = stack_pack(BOX, [Cuboid(i, 0.5, 0.5, 0.3) for i in range(3)], "z")
    assert [p.z for p in placed] == pytest.approx([0, 0.3, 0.6]) and not rest
    placed, rest = stack_pack(BOX, [Cuboid(i, 0.5, 0.5, 0.6) for i in range(2)], "z")
    assert len(placed) == 1 and rest == [1]
    with pytest.raises(PreconditionError, match="item 0"):
        stack_pack(BOX, [Cuboid(0, 1.2, 0.5, 0.1)], "z")


def test_stack_pack_other_axis():
    placed, _ = stack_pack(Box3D(1, 1, 1, 1, 0, 0), [Cuboid(i, 0.25, 1, 1) for i in range(4)], "x")
    assert [p.x for p in placed] == pytest.approx([1, 1.25, 1.5, 1.75])


# -- pack_sheets -------------------------------------------------------------

def test_pack_sheets_flat_stack():
    rects = [Rect(i, 0.75, 0.1) for i in range(6)]
    placed = pack_sheets(UNIT, rects, 0.1)
    assert [p.y for p in placed] == pytest.approx([0, 0.1, 0.2, 0.3, 0.4, 0.5])
    assert not any(p.rotated for p in placed)


def test_pack_sheets_rotates_overflow():
    region = Region2D(1.0, 0.8)
    rects = [Rect(i, 0.5, 0.04) for i in range(21)]
    placed = pack_sheets(region, rects, 0.05)
    rotated = [p for p in placed if p.rotated]
    assert len(placed) == 21 and len(rotated) == 1
    assert (rotated[0].x, rotated[0].y) == pytest.approx((0.96, 0.3))
    assert _rect_clean(region, rects, placed)


def test_pack_sheets_preconditions():
    with pytest.raises(PreconditionError, match="length < l/2"):
        pack_sheets(UNIT, [Rect(0, 0.4, 0.05)], 0.1)
    with pytest.raises(PreconditionError, match="l >= b"):
        pack_sheets(Region2D(0.5, 1.0), [], 0.1)
    with pytest.raises(PreconditionError, match="breadth"):
        pack_sheets(UNIT, [Rect(0, 0.6, 0.2)], 0.1)
    with pytest.raises(PreconditionError, match="total area"):
        pack_sheets(UNIT, [Rect(i, 1.0, 0.1) for i in range(5)], 0.1)


@given(seeds, st.sampled_from([0.05, 0.1, 0.2]))
def test_pack_sheets_lemma(rng, delta):
    region, rects, delta = H.sheets_input(rng, delta)
    placed = pack_sheets(region, rects, delta)
    assert len(placed) == len(rects)
    assert _rect_clean(region, rects, placed)
