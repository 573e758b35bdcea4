"""Benchmarks: numba kernels against the numpy path, and the strategy portfolio."""

import time

import numpy as np

from . import _kernels
from .instances import gen_random
from .strategies import portfolio_solve

SUITES = ("kernels", "strategies", "all")


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _random_boxes(rng, n):
    lo = rng.uniform(0, 0.9, size=(n, 3))
    hi = lo + rng.uniform(0.001, 0.01, size=(n, 3))
    return lo, hi


def bench_kernels(seed=0, repeat=3):
    """Rows of (kernel, size, numpy seconds, jit seconds or None)."""
    rng = np.random.default_rng(seed)
    rows = []
    backends = ["numpy"] + (["jit"] if _kernels.HAVE_JIT else [])
    cases = []
    for n in (200, 2000):
        lo, hi = _random_boxes(rng, n)
        cases.append(("overlap_pairs", n, lambda b, lo=lo, hi=hi: _kernels.overlap_pairs(lo, hi, 1e-9, backend=b)))
        q = lo[0], hi[0] + 0.05
        cases.append(("fits_free", n, lambda b, lo=lo, hi=hi, q=q: _kernels.fits_free(lo, hi, q[0], q[1], 1e-9, backend=b)))
    for n in (7, 9):
        sizes = rng.uniform(0.1, 0.6, size=(n, 3))
        caps = np.ones(3)
        prof = rng.integers(1, 20, size=n)
        cases.append(("gap_brute_force", n,
                      lambda b, s=sizes, c=caps, p=prof: _kernels.gap_brute_force(s, c, p, backend=b)))
    for name, n, fn in cases:
        timing = {}
        for b in backends:
            fn(b)  # warm-up, includes compilation for the jit path
            timing[b] = _time(lambda: fn(b), repeat)
        rows.append((name, n, timing["numpy"], timing.get("jit")))
    return rows


def bench_strategies(seed=0, sizes=(10, 40)):
    """Rows of (family, n, seconds, profit, winning provenance)."""
    rows = []
    for fam in ("thin-I1", "mixed-classes", "cubes"):
        for n in sizes:
            inst = gen_random(fam, n, seed)
            t = time.perf_counter()
            sol = portfolio_solve(inst)
            rows.append((fam, n, time.perf_counter() - t, sol.profit, sol.provenance))
    return rows


def format_kernels(rows):
    lines = [f"{'kernel':<16} {'n':>6} {'numpy s':>10} {'jit s':>10} {'speedup':>8}"]
    for name, n, t_np, t_jit in rows:
        if t_jit is None:
            lines.append(f"{name:<16} {n:>6} {t_np:>10.5f} {'-':>10} {'-':>8}")
        else:
            lines.append(f"{name:<16} {n:>6} {t_np:>10.5f} {t_jit:>10.5f} {t_np / max(t_jit, 1e-12):>8.1f}")
    return "\n".join(lines)


def format_strategies(rows):
    lines = [f"{'family':<14} {'n':>4} {'seconds':>8} {'profit':>8}  provenance"]
    for fam, n, t, p, prov in rows:
        lines.append(f"{fam:<14} {n:>4} {t:>8.3f} {str(p):>8}  {prov}")
    return "\n".join(lines)


def run_suite(suite, seed=0):
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    parts = []
    if suite in ("kernels", "all"):
        parts.append(format_kernels(bench_kernels(seed)))
    if suite in ("strategies", "all"):
        parts.append(format_strategies(bench_strategies(seed)))
    return "\n\n".join(parts)
