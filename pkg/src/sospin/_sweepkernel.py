"""Sequential heat-bath sweep kernel with online statistics.

One sweep visits every interior site in row-major order and resamples its
height from the exact single-site conditional restricted to the window, via
inverse-CDF lookup on the per-site uniform (which is what makes shared-
randomness chains couple monotonically).  Candidate weights are table lookups:
exp(-beta * g) for the integer gradient g plus a pinning bonus multiplier, so
the inner loop performs no transcendental calls.  The paired-zero count and
the total gradient are maintained incrementally and must match a full
recomputation at every measurement (asserted in tests and debug runs).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _q2_member(h, side, r, c):
    if h[r, c] > 0:
        return 0
    if r > 0 and h[r - 1, c] <= 0:
        return 1
    if r < side - 1 and h[r + 1, c] <= 0:
        return 1
    if c > 0 and h[r, c - 1] <= 0:
        return 1
    if c < side - 1 and h[r, c + 1] <= 0:
        return 1
    return 0


@njit(cache=True)
def full_stats(h, side, b):
    """Full recomputation of (paired-zero count, total gradient)."""
    q2 = 0
    grad = 0
    for r in range(side):
        for c in range(side):
            q2 += _q2_member(h, side, r, c)
            v = h[r, c]
            if c > 0:
                grad += abs(v - h[r, c - 1])
            else:
                grad += abs(v - b)
            if c == side - 1:
                grad += abs(v - b)
            if r > 0:
                grad += abs(v - h[r - 1, c])
            else:
                grad += abs(v - b)
            if r == side - 1:
                grad += abs(v - b)
    return q2, grad


@njit(cache=True, nogil=True)
def run_block(h, side, b, beta, lam, relaxed, lo, hi, u, q2, grad,
              exp_table, bonus_table):
    """Run u.shape[0] sweeps in place; returns updated (q2, grad)."""
    nsweeps = u.shape[0]
    width = hi - lo + 1
    weights = np.empty(width, np.float64)
    # cumulative tables for the flat-neighborhood fast path (all four
    # neighbors at value v, no zeros involved in relaxed mode); built with the
    # same summation order as the slow path, so the sampled values agree
    # bitwise with it
    flat_cum = np.empty((width, width), np.float64)
    for jv in range(width):
        v = lo + jv
        total = 0.0
        for j in range(width):
            k = lo + j
            w = exp_table[4 * abs(k - v)]
            if relaxed:
                pass
            else:
                if k == 0:
                    w *= bonus_table[1]
            total += w
            flat_cum[jv, j] = total
    for s in range(nsweeps):
        for i in range(side * side):
            r = i // side
            c = i % side
            old = h[r, c]
            n_up = h[r - 1, c] if r > 0 else b
            n_dn = h[r + 1, c] if r < side - 1 else b
            n_lf = h[r, c - 1] if c > 0 else b
            n_rt = h[r, c + 1] if c < side - 1 else b
            if (n_up == n_dn and n_lf == n_rt and n_up == n_lf
                    and (not relaxed or n_up >= 1)):
                jv = n_up - lo
                th = u[s, i] * flat_cum[jv, width - 1]
                new = hi
                for j in range(width):
                    if flat_cum[jv, j] > th:
                        new = lo + j
                        break
                if new != old:
                    grad += 4 * (abs(new - n_up) - abs(old - n_up))
                    # zeros can only be involved here in nonnegative mode,
                    # where membership still needs an interior zero neighbor
                    if new == 0 or old == 0:
                        before = _q2_member(h, side, r, c)
                        if r > 0:
                            before += _q2_member(h, side, r - 1, c)
                        if r < side - 1:
                            before += _q2_member(h, side, r + 1, c)
                        if c > 0:
                            before += _q2_member(h, side, r, c - 1)
                        if c < side - 1:
                            before += _q2_member(h, side, r, c + 1)
                        h[r, c] = new
                        after = _q2_member(h, side, r, c)
                        if r > 0:
                            after += _q2_member(h, side, r - 1, c)
                        if r < side - 1:
                            after += _q2_member(h, side, r + 1, c)
                        if c > 0:
                            after += _q2_member(h, side, r, c - 1)
                        if c < side - 1:
                            after += _q2_member(h, side, r, c + 1)
                        q2 += after - before
                    else:
                        h[r, c] = new
                continue
            # interior-neighbor floor statistics for the relaxed constraint
            min_int = 1 << 30
            z_le0 = 0
            z_dep = 0
            if relaxed:
                if r > 0:
                    if n_up < min_int:
                        min_int = n_up
                    if n_up <= 0:
                        z_le0 += 1
                        if not _other_le0(h, side, r - 1, c, r, c):
                            z_dep += 1
                if r < side - 1:
                    if n_dn < min_int:
                        min_int = n_dn
                    if n_dn <= 0:
                        z_le0 += 1
                        if not _other_le0(h, side, r + 1, c, r, c):
                            z_dep += 1
                if c > 0:
                    if n_lf < min_int:
                        min_int = n_lf
                    if n_lf <= 0:
                        z_le0 += 1
                        if not _other_le0(h, side, r, c - 1, r, c):
                            z_dep += 1
                if c < side - 1:
                    if n_rt < min_int:
                        min_int = n_rt
                    if n_rt <= 0:
                        z_le0 += 1
                        if not _other_le0(h, side, r, c + 1, r, c):
                            z_dep += 1
            bonus = 1 + z_dep if z_le0 > 0 else 0
            total = 0.0
            for j in range(width):
                k = lo + j
                ok = True
                if relaxed:
                    if k <= -1 and min_int <= 0:
                        ok = False
                    elif k == 0 and min_int <= -1:
                        ok = False
                if ok:
                    g = abs(k - n_up) + abs(k - n_dn) + abs(k - n_lf) + abs(k - n_rt)
                    w = exp_table[g]
                    if relaxed:
                        if k <= 0 and bonus > 0:
                            w *= bonus_table[bonus]
                    else:
                        if k == 0:
                            w *= bonus_table[1]
                    total += w
                    weights[j] = total
                else:
                    weights[j] = total
            th = u[s, i] * total
            new = hi
            for j in range(width):
                if weights[j] > th:
                    new = lo + j
                    break
            if new != old:
                before = _q2_member(h, side, r, c)
                if r > 0:
                    before += _q2_member(h, side, r - 1, c)
                if r < side - 1:
                    before += _q2_member(h, side, r + 1, c)
                if c > 0:
                    before += _q2_member(h, side, r, c - 1)
                if c < side - 1:
                    before += _q2_member(h, side, r, c + 1)
                grad += (abs(new - n_up) + abs(new - n_dn) + abs(new - n_lf)
                         + abs(new - n_rt)
                         - abs(old - n_up) - abs(old - n_dn)
                         - abs(old - n_lf) - abs(old - n_rt))
                h[r, c] = new
                after = _q2_member(h, side, r, c)
                if r > 0:
                    after += _q2_member(h, side, r - 1, c)
                if r < side - 1:
                    after += _q2_member(h, side, r + 1, c)
                if c > 0:
                    after += _q2_member(h, side, r, c - 1)
                if c < side - 1:
                    after += _q2_member(h, side, r, c + 1)
                q2 += after - before
    return q2, grad


@njit(cache=True, inline="always")
def _other_le0(h, side, r, c, xr, xc):
    """Does interior site (r, c) have an interior neighbor <= 0 other than
    the site (xr, xc) being resampled?"""
    if r > 0 and not (r - 1 == xr and c == xc) and h[r - 1, c] <= 0:
        return True
    if r < side - 1 and not (r + 1 == xr and c == xc) and h[r + 1, c] <= 0:
        return True
    if c > 0 and not (r == xr and c - 1 == xc) and h[r, c - 1] <= 0:
        return True
    if c < side - 1 and not (r == xr and c + 1 == xc) and h[r, c + 1] <= 0:
        return True
    return False


@njit(cache=True, nogil=True)
def site_conditional(h, side, b, beta, lam, relaxed, lo, hi, r, c,
                     exp_table, bonus_table):
    """The kernel's conditional weights for one site (diagnostic hook used to
    cross-check against the reference conditional)."""
    width = hi - lo + 1
    out = np.zeros(width, np.float64)
    n_up = h[r - 1, c] if r > 0 else b
    n_dn = h[r + 1, c] if r < side - 1 else b
    n_lf = h[r, c - 1] if c > 0 else b
    n_rt = h[r, c + 1] if c < side - 1 else b
    min_int = 1 << 30
    z_le0 = 0
    z_dep = 0
    if relaxed:
        if r > 0:
            min_int = min(min_int, n_up)
            if n_up <= 0:
                z_le0 += 1
                if not _other_le0(h, side, r - 1, c, r, c):
                    z_dep += 1
        if r < side - 1:
            min_int = min(min_int, n_dn)
            if n_dn <= 0:
                z_le0 += 1
                if not _other_le0(h, side, r + 1, c, r, c):
                    z_dep += 1
        if c > 0:
            min_int = min(min_int, n_lf)
            if n_lf <= 0:
                z_le0 += 1
                if not _other_le0(h, side, r, c - 1, r, c):
                    z_dep += 1
        if c < side - 1:
            min_int = min(min_int, n_rt)
            if n_rt <= 0:
                z_le0 += 1
                if not _other_le0(h, side, r, c + 1, r, c):
                    z_dep += 1
    bonus = 1 + z_dep if z_le0 > 0 else 0
    for j in range(width):
        k = lo + j
        if relaxed:
            if k <= -1 and min_int <= 0:
                continue
            if k == 0 and min_int <= -1:
                continue
        g = abs(k - n_up) + abs(k - n_dn) + abs(k - n_lf) + abs(k - n_rt)
        w = exp_table[g]
        if relaxed:
            if k <= 0 and bonus > 0:
                w *= bonus_table[bonus]
        else:
            if k == 0:
                w *= bonus_table[1]
        out[j] = w
    return out
