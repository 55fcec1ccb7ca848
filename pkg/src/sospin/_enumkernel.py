"""Depth-first enumeration kernel over windowed height configurations.

Sites are visited in the fixed row-major order; each assignment adds the
integer gradient of the edges it completes (left, up, and any adjacent ring
edges) and resolves the pinning tokens of every site whose neighborhood
became fully determined.  Inadmissible pairs prune the subtree immediately.
Leaf weights exp(-beta*G + lambda*T) are two table lookups on the integer
prefixes, accumulated by a Kahan-compensated plain sum: the flat-boundary
configuration always carries G = 0, so the total never underflows, and terms
below the double range are negligible relative to it.  The slice driver pins
the first few sites' joint values so independent slices run in parallel and
merge deterministically afterward.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def _pair_bad(u, v):
    return (u <= -1 and v <= 0) or (u <= 0 and v <= -1)


@njit(cache=True, inline="always")
def _assign(d, v, side, vals, b, relaxed, res_start, res_sites):
    """Integer (gradient, token) increment of setting site d to v; vals[d]
    must already hold v.  ok=False when a relaxed pair constraint fails."""
    r = d // side
    c = d % side
    grad = 0
    if c > 0:
        w = vals[d - 1]
        if relaxed and _pair_bad(v, w):
            return False, 0, 0
        grad += abs(v - w)
    else:
        grad += abs(v - b)
    if c == side - 1:
        grad += abs(v - b)
    if r > 0:
        u = vals[d - side]
        if relaxed and _pair_bad(v, u):
            return False, 0, 0
        grad += abs(v - u)
    else:
        grad += abs(v - b)
    if r == side - 1:
        grad += abs(v - b)
    tok = 0
    if relaxed:
        # pair constraint and token witnesses live on interior pairs only;
        # the ring contributes gradient alone
        for idx in range(res_start[d], res_start[d + 1]):
            t = res_sites[idx]
            if vals[t] > 0:
                continue
            tr = t // side
            tc = t % side
            mn = vals[t - 1] if tc > 0 else 1
            x = vals[t + 1] if tc < side - 1 else 1
            if x < mn:
                mn = x
            x = vals[t - side] if tr > 0 else 1
            if x < mn:
                mn = x
            x = vals[t + side] if tr < side - 1 else 1
            if x < mn:
                mn = x
            if mn <= 0:
                tok += 1
    else:
        if v == 0:
            tok += 1
    return True, grad, tok


@njit(cache=True)
def _dfs(side, lo, hi, b, relaxed, res_start, res_sites, vals,
         dstart, g0, t0, gtab, ttab):
    """Kahan sum of exp(-beta*G + lambda*T) over sites dstart..m-1."""
    m = side * side
    acc = 0.0
    comp = 0.0
    if dstart >= m:
        return gtab[g0] * ttab[t0]
    cur = np.empty(m, np.int64)
    gpre = np.empty(m + 1, np.int64)
    tpre = np.empty(m + 1, np.int64)
    d = dstart
    cur[d] = lo[d]
    gpre[d] = g0
    tpre[d] = t0
    last = m - 1
    while d >= dstart:
        v = cur[d]
        if v > hi[d]:
            d -= 1
            if d >= dstart:
                cur[d] += 1
            continue
        vals[d] = v
        ok, dg, dt = _assign(d, v, side, vals, b, relaxed, res_start, res_sites)
        if not ok:
            cur[d] += 1
            continue
        if d == last:
            w = gtab[gpre[d] + dg] * ttab[tpre[d] + dt]
            y = w - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
            cur[d] += 1
        else:
            gpre[d + 1] = gpre[d] + dg
            tpre[d + 1] = tpre[d] + dt
            d += 1
            cur[d] = lo[d]
    return acc


@njit(cache=True, parallel=True)
def _sum_sliced(side, lo, hi, b, relaxed, res_start, res_sites, ksplit,
                gtab, ttab):
    """Per-slice plain sums with the first ksplit sites pinned per slice."""
    m = side * side
    nslices = 1
    for i in range(ksplit):
        nslices *= hi[i] - lo[i] + 1
    out = np.zeros(nslices)
    for s in prange(nslices):
        vals = np.empty(m, np.int64)
        div = 1
        for i in range(ksplit - 1, -1, -1):
            w = hi[i] - lo[i] + 1
            vals[i] = lo[i] + (s // div) % w
            div *= w
        g0 = 0
        t0 = 0
        ok_all = True
        for d in range(ksplit):
            ok, dg, dt = _assign(d, vals[d], side, vals, b, relaxed,
                                 res_start, res_sites)
            if not ok:
                ok_all = False
                break
            g0 += dg
            t0 += dt
        if ok_all:
            out[s] = _dfs(side, lo, hi, b, relaxed, res_start, res_sites,
                          vals, ksplit, g0, t0, gtab, ttab)
    return out


def resolution_lists(side: int):
    """For each depth d, the sites whose token membership is decided by the
    assignment at d (their last-assigned neighbor, or themselves when no
    later neighbor exists)."""
    m = side * side
    resolved = [[] for _ in range(m)]
    for r in range(side):
        for c in range(side):
            i = r * side + c
            if r < side - 1:
                resolver = (r + 1) * side + c
            elif c < side - 1:
                resolver = r * side + c + 1
            else:
                resolver = i
            resolved[resolver].append(i)
    res_start = np.zeros(m + 1, dtype=np.int64)
    flat = []
    for d in range(m):
        res_start[d + 1] = res_start[d] + len(resolved[d])
        flat.extend(resolved[d])
    return res_start, np.array(flat, dtype=np.int64)


def log_weight_sum(side: int, lo, hi, boundary: int, beta: float, lam: float,
                   relaxed: bool, parallel_slices: bool = True):
    """Deterministic log of the total windowed weight, merged slice by slice
    through the streaming log-sum-exp."""
    import math

    from .logsum import StreamingLogSumExp

    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    m = side * side
    res_start, res_sites = resolution_lists(side)
    span = int(hi.max() - lo.min())
    off = max(abs(int(hi.max()) - boundary), abs(boundary - int(lo.min())))
    gmax = 4 * (span + off + 2) * m + 8
    gtab = np.exp(-beta * np.arange(gmax, dtype=np.float64))
    ttab = np.exp(lam * np.arange(m + 1, dtype=np.float64))
    total = 1.0
    for i in range(m):
        total *= hi[i] - lo[i] + 1
    ksplit = 0
    if parallel_slices and total > 1e6 and m >= 3:
        ksplit = 1
        nslices = hi[0] - lo[0] + 1
        while ksplit < min(m - 1, 4) and nslices < 16:
            nslices *= hi[ksplit] - lo[ksplit] + 1
            ksplit += 1
    parts = _sum_sliced(side, lo, hi, boundary, relaxed, res_start, res_sites,
                        ksplit, gtab, ttab)
    acc = StreamingLogSumExp()
    for p in parts:
        if p > 0.0:
            acc.add(math.log(p))
    return acc.value()
