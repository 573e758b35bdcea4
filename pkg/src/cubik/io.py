"""JSON instance and solution files."""

import json
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from .geometry import (
    CubikError, Instance, Item, Params, PackingSolution, Placement, ORIENT_TAGS, tol_for,
)


class ParseError(CubikError, ValueError):
    pass


def _decimal(value, what):
    try:
        d = Decimal(str(value))
    except InvalidOperation:
        raise ParseError(f"{what}: malformed decimal {value!r}") from None
    if not d.is_finite():
        raise ParseError(f"{what}: non-finite value {value!r}")
    return float(d)


def _fraction(value, what):
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{what}: malformed rational {value!r}") from None


def _num(x):
    return repr(float(x))


def _frac(p):
    return f"{p.numerator}/{p.denominator}"


def instance_to_dict(inst):
    params = {"eps": _num(inst.params.eps)}
    if inst.params.mu is not None:
        params["mu"] = _num(inst.params.mu)
    return {
        "side": _num(inst.side),
        "allow_rotation": bool(inst.allow_rotation),
        "items": [
            {"id": it.id, "w": _num(it.w), "d": _num(it.d), "h": _num(it.h), "p": _frac(it.p)}
            for it in inst.items
        ],
        "params": params,
    }


def instance_from_dict(data):
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    side = _decimal(data.get("side", "1"), "side")
    if side <= 0:
        raise ParseError("side: nonpositive")
    raw_items = data.get("items", [])
    if not isinstance(raw_items, list):
        raise ParseError("items must be a list")
    items = []
    for n, raw in enumerate(raw_items):
        if not isinstance(raw, dict):
            raise ParseError(f"item #{n}: not an object")
        # A missing id defaults to the item's position in the list.
        iid = raw.get("id", n)
        if not isinstance(iid, int) or isinstance(iid, bool):
            raise ParseError(f"item #{n}: id must be an integer")
        dims = []
        for key in ("w", "d", "h"):
            if key not in raw:
                raise ParseError(f"item {iid}: missing field {key!r}")
            val = _decimal(raw[key], f"item {iid} field {key}")
            if val <= 0:
                raise ParseError(f"item {iid}: nonpositive dimension {key}")
            if val > side + tol_for(side):
                raise ParseError(f"item {iid}: dimension {key} exceeds side")
            dims.append(val)
        p = _fraction(raw.get("p", "1"), f"item {iid} field p")
        if p < 0:
            raise ParseError(f"item {iid}: negative profit")
        items.append(Item(iid, *dims, p=p))
    ids = [it.id for it in items]
    if len(set(ids)) != len(ids):
        raise ParseError("duplicate item ids")
    raw_params = data.get("params", {}) or {}
    eps = _decimal(raw_params.get("eps", "0.1"), "params.eps")
    mu = raw_params.get("mu")
    mu = None if mu is None else _decimal(mu, "params.mu")
    rot = data.get("allow_rotation", False)
    if not isinstance(rot, bool):
        raise ParseError("allow_rotation must be a boolean")
    return Instance(side, tuple(items), rot, Params(eps, mu))


def parse_instance(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return instance_from_dict(data)


def write_instance(inst):
    return json.dumps(instance_to_dict(inst), indent=1) + "\n"


def solution_to_dict(sol):
    return {
        "profit": _frac(sol.profit),
        "placements": [
            {"id": pl.item_id, "orient": pl.orient, "x": float(pl.x), "y": float(pl.y), "z": float(pl.z)}
            for pl in sol.placements
        ],
        "provenance": sol.provenance,
    }


def solution_from_dict(data):
    if not isinstance(data, dict):
        raise ParseError("solution must be a JSON object")
    out = []
    for n, raw in enumerate(data.get("placements", [])):
        try:
            tag = raw.get("orient", "wdh")
            if tag not in ORIENT_TAGS:
                raise ParseError(f"placement #{n}: unknown orientation {tag!r}")
            out.append(Placement(int(raw["id"]), tag, float(raw["x"]), float(raw["y"]), float(raw["z"])))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"placement #{n}: malformed ({exc})") from None
    profit = _fraction(data.get("profit", "0"), "profit")
    return PackingSolution(tuple(out), profit, str(data.get("provenance", "")))


def parse_solution(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return solution_from_dict(data)


def write_solution(sol, instance=None):
    data = solution_to_dict(sol)
    if instance is not None:
        data["instance"] = instance_to_dict(instance)
    return json.dumps(data, indent=1) + "\n"
