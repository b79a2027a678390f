"""Vectorised adaptive Simpson quadrature over many panels at once."""

from __future__ import annotations

import numpy as np

MAX_DEPTH = 40


def adaptive_simpson(f, a, b, tol: float = 1e-12) -> np.ndarray:
    """Integrate ``f`` over each interval ``[a[i], b[i]]``.

    ``f`` must accept a 1-d array and return an array of the same length
    (real or complex).  Each interval is refined independently until the
    Richardson error estimate is below ``tol`` for that interval; the
    tolerance is halved with each bisection so leaves sum to at most ``tol``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    owner = np.arange(a.size)
    lo, hi = a.copy(), b.copy()
    flo, fhi = f(lo), f(hi)
    mid = 0.5 * (lo + hi)
    fmid = f(mid)
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    eps = np.full(a.size, tol)
    total = np.zeros(a.size, dtype=np.result_type(whole, float))

    for _ in range(MAX_DEPTH):
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        f_lm = f(lm)
        f_rm = f(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * f_lm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * f_rm + fhi)
        delta = left + right - whole
        done = np.abs(delta) <= 15.0 * eps
        np.add.at(total, owner[done], (left + right + delta / 15.0)[done])
        keep = ~done
        if not keep.any():
            return total
        # split survivors into their left and right halves
        owner = np.concatenate([owner[keep], owner[keep]])
        new_lo = np.concatenate([lo[keep], mid[keep]])
        new_hi = np.concatenate([mid[keep], hi[keep]])
        flo = np.concatenate([flo[keep], fmid[keep]])
        fhi = np.concatenate([fmid[keep], fhi[keep]])
        fmid = np.concatenate([f_lm[keep], f_rm[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        eps = np.concatenate([eps[keep], eps[keep]]) / 2.0
        lo, hi = new_lo, new_hi
        mid = 0.5 * (lo + hi)
    # depth exhausted: accept the best estimate rather than loop forever
    np.add.at(total, owner, whole)
    return total


def cumulative(f, grid, tol: float = 1e-12) -> np.ndarray:
    """Running integral of ``f`` from ``grid[0]`` to every grid point."""
    grid = np.asarray(grid, dtype=float)
    pieces = adaptive_simpson(f, grid[:-1], grid[1:], tol)
    out = np.zeros(grid.size, dtype=pieces.dtype)
    out[1:] = np.cumsum(pieces)
    return out
