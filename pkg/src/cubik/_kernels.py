"""Hot loops with a numba path and a plain numpy path.

The numba path is used when numba imports cleanly and ``CUBIK_NO_JIT`` is
unset (or "0"). Setting ``CUBIK_NO_JIT=1`` forces the numpy path, which is
what the benchmark compares against.
"""

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency
    njit = None

JIT_DISABLED = os.environ.get("CUBIK_NO_JIT", "0") not in ("", "0")
HAVE_JIT = njit is not None and not JIT_DISABLED


# -- overlap detection -------------------------------------------------------

def _overlap_pairs_py(lo, hi, tol, limit):
    n, dim = lo.shape
    out = np.empty((limit, 2), dtype=np.int64)
    count = 0
    order = np.argsort(lo[:, 0], kind="mergesort")
    for a in range(n):
        i = order[a]
        for b in range(a + 1, n):
            j = order[b]
            if lo[j, 0] >= hi[i, 0] - tol:
                break
            hit = True
            for k in range(dim):
                pen = min(hi[i, k], hi[j, k]) - max(lo[i, k], lo[j, k])
                if pen <= tol:
                    hit = False
                    break
            if hit:
                out[count, 0] = min(i, j)
                out[count, 1] = max(i, j)
                count += 1
                if count >= limit:
                    return out[:count]
    return out[:count]


def _overlap_pairs_np(lo, hi, tol, limit):
    n = lo.shape[0]
    found = []
    block = 512
    for s in range(0, n, block):
        e = min(n, s + block)
        pen = np.minimum(hi[s:e, None, :], hi[None, :, :]) - np.maximum(lo[s:e, None, :], lo[None, :, :])
        hit = np.all(pen > tol, axis=2)
        ii, jj = np.nonzero(hit)
        ii = ii + s
        keep = ii < jj
        for i, j in zip(ii[keep], jj[keep]):
            found.append((int(i), int(j)))
            if len(found) >= limit:
                return np.array(found, dtype=np.int64)
    if not found:
        return np.empty((0, 2), dtype=np.int64)
    return np.array(sorted(found), dtype=np.int64)


def _fits_free_py(lo, hi, qlo, qhi, tol):
    n, dim = lo.shape
    for i in range(n):
        hit = True
        for k in range(dim):
            pen = min(hi[i, k], qhi[k]) - max(lo[i, k], qlo[k])
            if pen <= tol:
                hit = False
                break
        if hit:
            return False
    return True


def _fits_free_np(lo, hi, qlo, qhi, tol):
    if lo.shape[0] == 0:
        return True
    pen = np.minimum(hi, qhi[None, :]) - np.maximum(lo, qlo[None, :])
    return not bool(np.any(np.all(pen > tol, axis=1)))


# -- brute force GAP ---------------------------------------------------------

def _gap_brute_py(sizes, caps, profits, tol):
    # Depth-first walk over every assignment in lexicographic order (digit k
    # means "unassigned" and sorts last). Only capacity-infeasible partial
    # assignments are cut; no profit bound is used.
    n, k = sizes.shape
    best_assign = np.full(n, k, dtype=np.int64)
    if n == 0:
        return 0, best_assign
    assign = np.full(n, -1, dtype=np.int64)
    loads = np.zeros(k)
    best = -1
    total = 0
    i = 0
    while i >= 0:
        cur = assign[i]
        if cur >= 0:
            # undo the previous choice at this level
            if cur < k:
                loads[cur] -= sizes[i, cur]
                total -= profits[i]
        nxt = cur + 1
        while nxt < k and not (loads[nxt] + sizes[i, nxt] <= caps[nxt] + tol):
            nxt += 1
        if nxt > k:
            assign[i] = -1
            i -= 1
            continue
        assign[i] = nxt
        if nxt < k:
            loads[nxt] += sizes[i, nxt]
            total += profits[i]
        if i == n - 1:
            if total > best:
                best = total
                for t in range(n):
                    best_assign[t] = assign[t]
        else:
            i += 1
    return best, best_assign


def _gap_brute_np(sizes, caps, profits, tol):
    n, k = sizes.shape
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    total = (k + 1) ** n
    best = -1
    best_assign = np.full(n, k, dtype=np.int64)
    radix = (k + 1) ** np.arange(n - 1, -1, -1, dtype=np.int64)
    chunk = 1 << 16
    ext = np.concatenate([sizes, np.zeros((n, 1))], axis=1)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (codes[:, None] // radix[None, :]) % (k + 1)
        per = ext[np.arange(n)[None, :], digits]
        ok = np.ones(len(codes), dtype=bool)
        for j in range(k):
            load = np.where(digits == j, per, 0.0).sum(axis=1)
            ok &= load <= caps[j] + tol
        prof = np.where(digits < k, profits[None, :], 0).sum(axis=1)
        prof = np.where(ok, prof, -1)
        idx = int(np.argmax(prof))
        if prof[idx] > best:
            best = int(prof[idx])
            best_assign = digits[idx].astype(np.int64)
    return best, best_assign


if HAVE_JIT:
    _overlap_pairs_jit = njit(cache=True)(_overlap_pairs_py)
    _fits_free_jit = njit(cache=True)(_fits_free_py)
    _gap_brute_jit = njit(cache=True)(_gap_brute_py)


def overlap_pairs(lo, hi, tol, limit=64, backend=None):
    """Index pairs (i < j) whose boxes share interior beyond ``tol`` on every axis."""
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    hi = np.ascontiguousarray(hi, dtype=np.float64)
    if lo.shape[0] < 2:
        return np.empty((0, 2), dtype=np.int64)
    if _use_jit(backend):
        pairs = _overlap_pairs_jit(lo, hi, float(tol), int(limit))
        return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))] if len(pairs) else pairs
    return _overlap_pairs_np(lo, hi, float(tol), int(limit))


def fits_free(lo, hi, qlo, qhi, tol, backend=None):
    """True when the query box overlaps none of the given boxes."""
    lo = np.ascontiguousarray(lo, dtype=np.float64).reshape(-1, len(qlo))
    hi = np.ascontiguousarray(hi, dtype=np.float64).reshape(-1, len(qlo))
    qlo = np.asarray(qlo, dtype=np.float64)
    qhi = np.asarray(qhi, dtype=np.float64)
    if _use_jit(backend):
        return bool(_fits_free_jit(lo, hi, qlo, qhi, float(tol)))
    return _fits_free_np(lo, hi, qlo, qhi, float(tol))


def gap_brute_force(sizes, caps, profits, tol=1e-9, backend=None):
    """Exhaustive GAP optimum over all (k+1)^n assignments.

    ``profits`` are integers (callers scale rationals to a common
    denominator). Returns the best profit and the lexicographically first
    optimal assignment, with ``k`` standing for "unassigned".
    """
    sizes = np.ascontiguousarray(sizes, dtype=np.float64)
    caps = np.ascontiguousarray(caps, dtype=np.float64)
    profits = np.ascontiguousarray(profits, dtype=np.int64)
    if _use_jit(backend):
        best, assign = _gap_brute_jit(sizes, caps, profits, float(tol))
    else:
        best, assign = _gap_brute_np(sizes, caps, profits, float(tol))
    return int(best), [int(a) for a in assign]


def _use_jit(backend):
    if backend is None:
        return HAVE_JIT
    if backend == "jit":
        if not HAVE_JIT:
            raise RuntimeError("numba path unavailable (CUBIK_NO_JIT set or numba missing)")
        return True
    if backend == "numpy":
        return False
    raise ValueError(f"unknown backend {backend!r}")
