from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import helpers as H
from cubik.containers import Container, cap, check_container_layout, f_C, pack_into_container, placement_inside
from cubik.geometry import Item, Knapsack, PreconditionError, make_solution, validate_packing

K = Knapsack(1.0)
seeds = st.integers(0, 2 ** 32 - 1).map(np.random.default_rng)
CONSTANTS = {"Stack": 0, "Area": 3, "Volume": 4, "Steinberg": 9, "LCont": 8}


def test_cap_examples():
    assert cap(Container("Stack", 1, 1, 0.5)) == 0.5
    assert cap(Container("LCont", 1, 1, 1)) == 0.75
    assert cap(Container("Steinberg", 1, 1, 0.6)) == pytest.approx(0.2)
    assert cap(Container("Area", 0.5, 1, 0.4)) == pytest.approx(0.2)
    assert cap(Container("Volume", 0.5, 0.5, 0.4)) == pytest.approx(0.1)


def test_lcont_invariants():
    with pytest.raises(PreconditionError, match="w_C >= h_C"):
        Container("LCont", 0.5, 1, 1)
    with pytest.raises(PreconditionError, match="capacity"):
        Container("LCont", 1, 1, 0.2)
    with pytest.raises(PreconditionError):
        Container("Crate", 1, 1, 1)


def test_f_c_examples():
    assert f_C(Container("Stack", 1, 1, 0.5), Item(0, 0.3, 0.3, 0.2)) == 0.2
    assert f_C(Container("Area", 1, 1, 1, eps=0.1), Item(0, 0.05, 0.8, 0.05)) == pytest.approx(0.0025)
    lc = Container("LCont", 1, 1, 1, eps=0.1)
    it = Item(0, 0.3, 0.6, 0.05)
    assert f_C(lc, it) is None
    assert f_C(lc, it, allow_rotation=True) is None
    assert f_C(lc, Item(1, 0.8, 0.6, 0.05)) == pytest.approx(0.04)


def test_f_c_rotation_finds_thin_side():
    c = Container("Area", 1, 1, 1, eps=0.1)
    it = Item(0, 0.8, 0.05, 0.05)
    assert f_C(c, it) is None
    assert f_C(c, it, allow_rotation=True) == pytest.approx(0.0025)
    # Volume sizes do not depend on the orientation.
    v = Container("Volume", 1, 1, 1, eps=0.5)
    assert f_C(v, Item(1, 0.1, 0.2, 0.4), True) == pytest.approx(0.008)


dims = st.floats(0.01, 1.0)


@given(st.sampled_from(list(CONSTANTS)), dims, dims, dims, st.sampled_from(["x", "y", "z"]))
def test_rotation_never_increases_size(kind, w, d, h, axis):
    c = Container(kind, 1, 1, 1, axis=axis, eps=0.2)
    it = Item(0, w, d, h)
    plain = f_C(c, it)
    if plain is not None:
        assert f_C(c, it, True) <= plain


def test_stack_keeps_everything():
    c = Container("Stack", 1, 1, 0.5)
    items = [Item(i, 0.5, 0.5, h, Fraction(1)) for i, h in enumerate((0.1, 0.2, 0.2))]
    placed, dropped = pack_into_container(c, items)
    assert len(placed) == 3 and not dropped


def test_area_nfdh_full():
    c = Container("Area", 1, 1, 1, eps=0.1)
    items = [Item(i, 0.08, 0.5, 0.1, Fraction(1)) for i in range(100)]
    placed, dropped = pack_into_container(c, items)
    assert len(placed) == 100 and not dropped
    assert validate_packing(K, make_solution(placed, items), items, False).ok


def test_lcont_prefix_threshold():
    c = Container("LCont", 1, 1, 1, eps=0.05)
    items = [Item(i, 0.74, 0.6, 0.05, Fraction(1)) for i in range(20)]
    assert sum(f_C(c, it) for it in items) == pytest.approx(0.74)
    placed, dropped = pack_into_container(c, items)
    area = sum(0.74 * 0.05 for _ in placed)
    assert area <= 0.6 + 1e-9
    assert len(placed) >= (1 - 8 * 0.05) * 20
    assert validate_packing(K, make_solution(placed, items), items, False).ok


def test_inadmissible_item_is_an_error():
    with pytest.raises(PreconditionError):
        pack_into_container(Container("Volume", 1, 1, 1, eps=0.1), [Item(0, 0.5, 0.05, 0.05)])


def test_check_container_layout_examples():
    assert check_container_layout([Container("Steinberg", 1, 1, 0.3), Container("Stack", 1, 1, 0.7, z0=0.3)], K)
    assert not check_container_layout([Container("Stack", 1, 1, 1), Container("Stack", 1, 1, 1)], K)
    assert not check_container_layout([Container("Stack", 1, 1, 0.5, z0=0.6)], K)
    assert check_container_layout([], K)


def _contract(c, items, c_type):
    placed, dropped = pack_into_container(c, items)
    lookup = {it.id: it for it in items}
    assert all(placement_inside(c, pl, lookup[pl.item_id]) for pl in placed)
    assert not H.boxes_violations(c.origin, c.dims, H.placements_3d(placed, lookup))
    kept = sum((lookup[pl.item_id].p for pl in placed), Fraction(0))
    total = sum((it.p for it in items), Fraction(0))
    return kept, total


@given(seeds, st.sampled_from(["Stack", "Area", "Volume", "Steinberg"]), st.sampled_from([0.05, 0.1, 0.2]))
def test_contract(rng, kind, eps):
    c, items = H.container_input(rng, kind, eps)
    kept, total = _contract(c, items, CONSTANTS[kind])
    assert kept >= (1 - CONSTANTS[kind] * Fraction(str(eps))) * total


@given(seeds, st.sampled_from([0.05, 0.1, 0.2]))
def test_lcont_contract_for_tall_enough_containers(rng, eps):
    c, items = H.container_input(rng, "LCont", eps)
    kept, total = _contract(c, items, 8)
    if c.h >= c.w / 3:
        assert kept >= (1 - 8 * Fraction(str(eps))) * total


def test_lcont_constant_fails_for_flat_containers():
    # With capacity w h - w^2/4 the reserve 3 eps h^2 is not O(eps) of the
    # capacity once h approaches w/4: here nothing fits at all.
    c = Container("LCont", 1, 1, 0.27, eps=0.1)
    items = [Item(0, 0.9, 0.6, 0.02, Fraction(1))]
    assert f_C(c, items[0]) <= cap(c)
    placed, dropped = pack_into_container(c, items)
    assert not placed and dropped == [0]


@pytest.mark.parametrize("kind,axis", [(k, a) for k in CONSTANTS for a in "xyz"])
def test_axis_variants_stay_inside(kind, axis):
    c = Container(kind, 0.9, 0.8, 0.7, 0.05, 0.1, 0.2, axis=axis, eps=0.2)
    rng = np.random.default_rng(list(CONSTANTS).index(kind) * 3 + "xyz".index(axis))
    pool = [Item(i, *rng.uniform(0.01, 0.7, 3), Fraction(int(rng.integers(1, 9)))) for i in range(400)]
    items, load = [], 0.0
    for it in pool:
        s = f_C(c, it)
        if s is not None and load + s <= cap(c):
            items.append(it)
            load += s
    placed, _ = pack_into_container(c, items)
    lookup = {it.id: it for it in items}
    assert all(placement_inside(c, pl, lookup[pl.item_id]) for pl in placed)
    assert validate_packing(K, make_solution(placed, lookup), items, False).ok
