"""Item classes: large items, thin items by direction, and their splits."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import PreconditionError

CLASS_NAMES = ("L", "I1", "I2", "I3")
SPLIT_NAMES = ("I1l", "I1s", "I2l", "I2s", "I3l", "I3s", "S2", "S3", "S", "T2", "T3", "T")


@dataclass
class Classification:
    """Exact partition of item ids plus profit and volume totals per class.

    ``S2``, ``S3`` and ``S`` hold the items of I2, I3 and L with normalized
    height at most 1/2; ``T2``, ``T3`` and ``T`` hold the taller rest.
    """

    mu: float
    classes: dict = field(default_factory=dict)
    profit: dict = field(default_factory=dict)
    volume: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.classes[name]

    def of(self, item_id):
        for name in CLASS_NAMES:
            if item_id in self.classes[name]:
                return name
        raise KeyError(item_id)

    def to_dict(self):
        return {
            "mu": self.mu,
            "classes": {k: list(v) for k, v in self.classes.items()},
            "profit": {k: f"{p.numerator}/{p.denominator}" for k, p in self.profit.items()},
            "volume": dict(self.volume),
        }


def normalized(item, side):
    return (item.w / side, item.d / side, item.h / side)


def classify_items(items, mu, side=1.0):
    if not 0 < mu < 0.5:
        raise PreconditionError("mu must lie in (0, 1/2)")
    out = {name: [] for name in CLASS_NAMES + SPLIT_NAMES}
    prof = {name: Fraction(0) for name in out}
    vol = {name: 0.0 for name in out}

    def put(name, it, v):
        out[name].append(it.id)
        prof[name] += it.p
        vol[name] += v

    for it in sorted(items, key=lambda it: it.id):
        w, d, h = normalized(it, side)
        v = w * d * h
        if w > mu and d > mu and h > mu:
            put("L", it, v)
            put("S" if h <= 0.5 else "T", it, v)
        elif h <= mu:
            put("I1", it, v)
            put("I1l" if w > 0.5 and d > 0.5 else "I1s", it, v)
        elif w <= mu:
            put("I2", it, v)
            put("I2l" if d > 0.5 and h > 0.5 else "I2s", it, v)
            put("S2" if h <= 0.5 else "T2", it, v)
        else:
            put("I3", it, v)
            put("I3l" if w > 0.5 and h > 0.5 else "I3s", it, v)
            put("S3" if h <= 0.5 else "T3", it, v)
    return Classification(mu, {k: tuple(v) for k, v in out.items()}, prof, vol)


# -- medium-item removal -----------------------------------------------------

@dataclass(frozen=True)
class DeltaBand:
    delta: float
    lower: float
    medium_profit: Fraction


def delta_candidates(eps, floor=1e-6):
    k = math.ceil(2 / eps)
    out = []
    d = eps
    for _ in range(k):
        lo = max(d ** 10, floor)
        out.append((d, lo))
        d = lo
    return out


def _in_band(x, lo, hi):
    return lo <= x < hi


def medium_profit(items, delta, lower, side=1.0):
    total = Fraction(0)
    for it in items:
        w, d, _ = normalized(it, side)
        if _in_band(w, lower, delta) or _in_band(d, lower, delta):
            total += it.p
    return total


def choose_delta(items, eps, floor=1e-6, side=1.0):
    """The band [delta^10, delta) carrying the least profit among ceil(2/eps) candidates."""
    if not 0 < eps <= 0.5:
        raise PreconditionError("eps must lie in (0, 1/2]")
    best = None
    for d, lo in delta_candidates(eps, floor):
        p = medium_profit(items, d, lo, side)
        if best is None or p < best.medium_profit:
            best = DeltaBand(d, lo, p)
    return best


def big_wide_long_small(items, delta, lower=None, side=1.0):
    """Split by width and depth against delta; medium items are reported apart."""
    if not 0 < delta < 1:
        raise PreconditionError("delta must lie in (0, 1)")
    lower = delta ** 10 if lower is None else lower
    out = {"big": [], "wide": [], "long": [], "small": [], "medium": []}
    for it in sorted(items, key=lambda it: it.id):
        w, d, _ = normalized(it, side)
        if _in_band(w, lower, delta) or _in_band(d, lower, delta):
            out["medium"].append(it.id)
        elif w >= delta and d >= delta:
            out["big"].append(it.id)
        elif w >= delta:
            out["wide"].append(it.id)
        elif d >= delta:
            out["long"].append(it.id)
        else:
            out["small"].append(it.id)
    return out
