"""Lower bounds on the best container packing and the ratios they certify.

A ProfitProfile splits the optimum's profit and volume by item class. Each
bound below is a guaranteed container-packing profit at eps = 0. A ratio
is ``opt / max(bounds of the case)``; each case also carries the weighted
sum of bounds that its claim adds up, which is checked exactly.
"""

from dataclasses import dataclass, fields, replace
from fractions import Fraction

from .geometry import PreconditionError

F = Fraction
VARIANTS = ("general", "simple5", "cardinality", "uniform-density",
            "rot-general", "rot-cardinality", "rot-uniform-density")
_IDX = (1, 2, 3)


def _q(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 12)
    return Fraction(str(x))


@dataclass(frozen=True)
class ProfitProfile:
    """Profit of the optimum split by class, with class volumes.

    ``opt2t``/``opt2h`` split opt_2 into items of height at most 1/2 and the
    taller rest (likewise for I3 and L). ``opt_p``/``opt_pp`` are only used by
    the rotational uniform-density case: sheets and the remaining thin items.
    """

    opt1: Fraction
    opt2: Fraction
    opt3: Fraction
    optL: Fraction
    opt1l: Fraction
    opt1s: Fraction
    opt2l: Fraction
    opt2s: Fraction
    opt3l: Fraction
    opt3s: Fraction
    opt2t: Fraction
    opt2h: Fraction
    opt3t: Fraction
    opt3h: Fraction
    optLt: Fraction
    optLh: Fraction
    v1: Fraction = F(0)
    v2: Fraction = F(0)
    v3: Fraction = F(0)
    v1s: Fraction = F(0)
    v2s: Fraction = F(0)
    v3s: Fraction = F(0)
    opt_p: Fraction | None = None
    opt_pp: Fraction | None = None

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _q(getattr(self, f.name)))
        bad = [f.name for f in fields(self) if getattr(self, f.name) is not None and getattr(self, f.name) < 0]
        if bad:
            raise PreconditionError(f"negative profile entries: {', '.join(bad)}")
        for i in _IDX:
            if self.split(i, "l") + self.split(i, "s") != self.opt(i):
                raise PreconditionError(f"opt{i}l + opt{i}s != opt{i}")
            if self.vol(i, "s") > self.vol(i):
                raise PreconditionError(f"v{i}s > v{i}")
        for i in (2, 3):
            if self.split(i, "t") + self.split(i, "h") != self.opt(i):
                raise PreconditionError(f"opt{i}t + opt{i}h != opt{i}")
        if self.optLt + self.optLh != self.optL:
            raise PreconditionError("optLt + optLh != optL")
        if self.v1 + self.v2 + self.v3 > 1:
            raise PreconditionError("class volumes exceed the knapsack")
        if (self.opt_p is None) != (self.opt_pp is None):
            raise PreconditionError("opt_p and opt_pp go together")
        if self.opt_p is not None and self.opt_p + self.opt_pp != self.opt1 + self.opt2 + self.opt3:
            raise PreconditionError("opt_p + opt_pp != opt1 + opt2 + opt3")

    @property
    def total(self):
        return self.opt1 + self.opt2 + self.opt3 + self.optL

    def opt(self, i):
        return getattr(self, f"opt{i}")

    def split(self, i, part):
        return getattr(self, f"opt{i}{part}")

    def vol(self, i, part=""):
        return getattr(self, f"v{i}{part}")

    @classmethod
    def make(cls, **kw):
        """Fill missing splits; by default opt_i is all small and all tall."""
        kw = {k: _q(v) for k, v in kw.items()}

        def pair(total, a, b, default_b):
            if a in kw and b not in kw:
                kw[b] = total - kw[a]
            elif b in kw and a not in kw:
                kw[a] = total - kw[b]
            elif a not in kw:
                kw[b] = total if default_b else F(0)
                kw[a] = total - kw[b]

        for i in _IDX:
            kw.setdefault(f"opt{i}", F(0))
            pair(kw[f"opt{i}"], f"opt{i}l", f"opt{i}s", True)
        for i in (2, 3):
            pair(kw[f"opt{i}"], f"opt{i}t", f"opt{i}h", True)
        kw.setdefault("optL", F(0))
        pair(kw["optL"], "optLt", "optLh", True)
        return cls(**kw)

    def scaled(self, c):
        c = _q(c)
        return replace(self, **{f.name: getattr(self, f.name) * c for f in fields(self)
                                if f.name.startswith("opt") and getattr(self, f.name) is not None})

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                out[f.name] = f"{v.numerator}/{v.denominator}"
        return out

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise PreconditionError(f"unknown profile fields: {sorted(unknown)}")
        return cls.make(**d)


def lower_bound_formulas(p, eps=0):
    """Every bound whose guard holds, as exact rationals.

    ``eps`` scales each value by (1 - eps), a uniform stand-in for the
    unspecified O(eps) losses.
    """
    if not isinstance(p, ProfitProfile):
        raise PreconditionError("expected a ProfitProfile")
    eps = _q(eps)
    if not 0 <= eps < 1:
        raise PreconditionError("eps must lie in [0, 1)")
    o = {i: p.opt(i) for i in _IDX}
    big = max(p.split(i, "l") for i in _IDX)
    b = {
        "singletons_L": p.optL,
        "structured": F(2, 3) * max(o.values()),
        "big_large": p.optL + big,
        "two_dk": F(1, 2) * (p.opt2h + p.opt3h + p.optLh),
    }
    for i in _IDX:
        vs = p.vol(i, "s")
        b[f"packing_I{i}_s"] = p.split(i, "s") / max(3 * vs, F(1))
        if p.vol(i) <= F(1, 3):
            b[f"packing_I{i}_ls"] = F(3, 4) * p.split(i, "l") + p.split(i, "s")
        if p.vol(i) <= F(1, 4):
            b[f"packing_I{i}"] = o[i]
        v = p.vol(i)
        b[f"stack_stein_I{i}"] = o[i] if v <= F(1, 4) else F(1, 4) / v * o[i]
    if p.v1 <= F(1, 6):
        b["combine"] = (F(3, 4) * p.opt1l + p.opt1s
                        + max(F(3, 20) * (p.opt2t + p.opt3t), F(1, 3) * p.optLt))
    if any(p.vol(i) > F(1, 4) for i in _IDX):
        b["ud_quarter"] = F(1, 4)
    thin = o[1] + o[2] + o[3]
    b["rot_number_theory"] = p.optL + big
    b["rot_stein_gs"] = F(1, 3) * (p.opt1s + p.opt2s + p.opt3s)
    b["rotationalgo"] = F(7, 24) * thin
    b["containerrotation"] = p.optL / 3 + p.total / 6
    if p.opt_p is not None:
        b["rud_sheets"] = min(F(1, 3), p.opt_p)
        b["rud_rest"] = min(F(1, 3), p.opt_pp)
    return {k: v * (1 - eps) for k, v in b.items()}


@dataclass(frozen=True)
class Certificate:
    """The case a profile falls in, its bounds and the claim's weighted sum.

    ``claim`` is (weights, coefficient): the claim states that
    sum(w * bound) >= coefficient * covered, where ``covered`` is opt
    (or the thin part of opt for the cardinality variants).
    """

    variant: str
    case: str
    constant: Fraction
    bounds: dict
    ratio: Fraction
    claim: tuple | None = None

    @property
    def claim_holds(self):
        if self.claim is None:
            return self.ratio <= self.constant
        weights, coef, covered = self.claim
        lhs = sum((w * _term(self.bounds, name) for name, w in weights.items()), F(0))
        return lhs >= coef * covered


def _term(bounds, name):
    if isinstance(name, tuple):
        return max(bounds[n] for n in name)
    return bounds[name]


def _general_case(p, all_b):
    v = {i: p.vol(i) for i in _IDX}
    over = [i for i in _IDX if v[i] > F(1, 3)]
    if len(over) <= 1:
        j = max(_IDX, key=lambda i: (v[i], -i))
        a, c = [i for i in _IDX if i != j]
        w = {"structured": F(6), "big_large": F(4), f"packing_I{a}_ls": F(4), f"packing_I{c}_ls": F(4)}
        return "9/2", F(9, 2), w, F(4)
    a = next(i for i in _IDX if i not in over)
    b, c = over
    if p.vol(b, "s") > F(1, 3) and p.vol(c, "s") <= F(1, 3):
        b, c = c, b
    if p.vol(b, "s") <= F(1, 3):
        w = {"structured": F(15), "big_large": F(8), f"packing_I{a}_ls": F(8), f"packing_I{b}_s": F(6)}
        return "37/8", F(37, 8), w, F(8)
    lem = (f"packing_I{b}_s", f"packing_I{c}_s")
    if v[a] > F(1, 4):
        w = {"structured": F(60), "big_large": F(32), f"packing_I{a}_ls": F(32), lem: F(27)}
        return "151/32", F(151, 32), w, F(32)
    if v[a] > F(1, 6):
        w = {"structured": F(6), "big_large": F(4), f"packing_I{a}": F(4), lem: F(5)}
        return "19/4", F(19, 4), w, F(4)
    if a != 1:
        # The height splits t/h exist for I2, I3 and L only.
        raise PreconditionError("the v <= 1/6 case needs the low-volume class to be I1")
    w = {"structured": F(312), "big_large": F(104), "combine": F(116), "two_dk": F(24)}
    return "139/29", F(139, 29), w, F(116)


def certify(p, variant):
    """Case, bounds, ratio and claim check of ``p`` under ``variant``."""
    if variant not in VARIANTS:
        raise PreconditionError(f"unknown variant {variant!r}")
    if p.total <= 0:
        raise PreconditionError("profile has zero profit")
    all_b = lower_bound_formulas(p)
    thin = p.opt1 + p.opt2 + p.opt3
    claim = None
    if variant == "general":
        case, const, w, coef = _general_case(p, all_b)
        names = [n for key in w for n in (key if isinstance(key, tuple) else (key,))]
        claim = (w, coef, p.total)
    elif variant == "simple5":
        case, const = "5", F(5)
        names = ["singletons_L", "structured"] + [f"stack_stein_I{i}" for i in _IDX]
    elif variant == "cardinality":
        low = [i for i in _IDX if p.vol(i) <= F(1, 3)]
        if not low:
            raise PreconditionError("no class has volume at most 1/3")
        case, const = "17/4", F(17, 4)
        a = low[0]
        names = ["structured", "big_large"] + [f"packing_I{i}_ls" for i in low]
        claim = ({"structured": F(12), "big_large": F(1), f"packing_I{a}_ls": F(4)}, F(4), thin)
    elif variant == "uniform-density":
        case, const = "4", F(4)
        names = ["singletons_L"] + [n for n in ("packing_I1", "packing_I2", "packing_I3", "ud_quarter") if n in all_b]
    elif variant in ("rot-general", "rot-cardinality"):
        names = ["rot_number_theory", "rot_stein_gs", "rotationalgo", "containerrotation"]
        if variant == "rot-general":
            case, const = "30/7", F(30, 7)
        else:
            case, const = "24/7", F(24, 7)
            claim = ({"rotationalgo": F(1)}, F(7, 24), thin)
    else:
        if p.opt_p is None:
            raise PreconditionError("rot-uniform-density needs opt_p and opt_pp")
        case, const = "3", F(3)
        names = ["singletons_L", "rud_sheets", "rud_rest"]
    missing = [n for n in names if n not in all_b]
    if missing:
        raise PreconditionError(f"case {case} needs bounds whose guards fail: {missing}")
    bounds = {n: all_b[n] for n in names}
    best = max(bounds.values())
    if best <= 0:
        raise PreconditionError(f"no positive bound in case {case}")
    return Certificate(variant, case, const, bounds, p.total / best, claim)


def ratio_certificate(p, variant):
    return certify(p, variant).ratio


def tight_instances():
    """(variant, profile, expected ratio) for every ratio the analysis attains."""
    mk = ProfitProfile.make
    return [
        ("general", mk(opt1=F(23, 139), opt2=F(87, 278), opt3=F(87, 278), optL=F(29, 139),
                       opt1l=0, opt2l=0, opt3l=0,
                       opt2t=0, opt2h=F(87, 278), opt3t=F(40, 139), opt3h=F(7, 278),
                       optLt=F(18, 139), optLh=F(11, 139),
                       v1=0, v2=F(1, 2), v3=F(1, 2), v2s=F(1, 2), v3s=F(1, 2)), F(139, 29)),
        ("simple5", mk(opt1=F(1, 5), opt2=F(3, 10), opt3=F(3, 10), optL=F(1, 5),
                       v1=F(1, 8), v2=F(3, 8), v3=F(3, 8)), F(5)),
        ("cardinality", mk(opt1=F(5, 17), opt2=F(6, 17), opt3=F(6, 17),
                           opt1l=F(4, 17), opt2l=F(4, 17), opt3l=F(4, 17),
                           v1=F(1, 4), v2=F(3, 8), v3=F(3, 8)), F(17, 4)),
        ("uniform-density", mk(opt1=F(1, 4), opt2=F(1, 4), opt3=F(1, 4), optL=F(1, 4),
                               opt1l=F(1, 8), opt2l=F(1, 8), opt3l=F(1, 8), optLt=F(1, 8),
                               v1=F(1, 4), v2=F(1, 4), v3=F(1, 4)), F(4)),
        ("rot-general", mk(opt1=F(11, 15), opt2=F(1, 30), opt3=F(1, 30), optL=F(1, 5),
                           opt1l=F(1, 30), opt2l=F(1, 30), opt3l=F(1, 30)), F(30, 7)),
        ("rot-cardinality", mk(opt1=F(1), opt1l=F(7, 24)), F(24, 7)),
        ("rot-uniform-density", mk(opt1=F(2, 3), optL=F(1, 3), opt_p=F(1, 3), opt_pp=F(1, 3)), F(3)),
    ]


# -- the uniform-density LP and its dual ------------------------------------
#
# Primal variables: opt_gs, opt1, opt2, opt3, optL, a1, a2, b1, b2, c1, c2.
# Rows 1-9 are ">= 0" constraints, rows 10-13 equalities; minimize opt_gs.

PRIMAL_VARS = ("opt_gs", "opt1", "opt2", "opt3", "optL", "a1", "a2", "b1", "b2", "c1", "c2")
PRIMAL_GE = (
    {"opt_gs": 1, "opt1": F(-2, 3)},
    {"opt_gs": 1, "opt2": F(-2, 3)},
    {"opt_gs": 1, "opt3": F(-2, 3)},
    {"opt_gs": 1, "optL": -1, "a1": -1},
    {"opt_gs": 1, "optL": -1, "b1": -1},
    {"opt_gs": 1, "optL": -1, "c1": -1},
    {"opt_gs": 1, "a1": F(-3, 4), "a2": -1},
    {"opt_gs": 1, "b1": F(-3, 4), "b2": -1},
    {"opt_gs": 1, "c1": F(-3, 4), "c2": -1},
)
PRIMAL_EQ = (
    ({"opt1": 1, "opt2": 1, "opt3": 1, "optL": 1}, 1),
    ({"opt1": -1, "a1": 1, "a2": 1}, 0),
    ({"opt2": -1, "b1": 1, "b2": 1}, 0),
    ({"opt3": -1, "c1": 1, "c2": 1}, 0),
)
PAPER_DUAL = tuple(F(n, 16) for n in (0, 0, 0, 1, 1, 2, 4, 4, 4, 4, 4, 4, 4))


def dual_constraints():
    """Rows (coefficients over y1..y13, rhs) of the dual, one per primal column.

    The opt_gs column gives sum(y1..y9) <= 1; every other column c gives
    sum_r A[r][c] y_r <= 0.
    """
    rows = PRIMAL_GE + tuple(r for r, _ in PRIMAL_EQ)
    out = []
    for var in PRIMAL_VARS:
        coeffs = tuple(F(r.get(var, 0)) for r in rows)
        out.append((coeffs, F(1) if var == "opt_gs" else F(0)))
    return out


def verify_dual_certificate(y=None):
    """(feasible, objective) of a dual vector; the objective is y10."""
    y = PAPER_DUAL if y is None else tuple(_q(v) for v in y)
    if len(y) != 13:
        raise PreconditionError("the dual has 13 variables")
    feasible = all(v >= 0 for v in y[:9])
    for coeffs, rhs in dual_constraints():
        if sum((c * v for c, v in zip(coeffs, y)), F(0)) > rhs:
            feasible = False
    return feasible, y[9]
