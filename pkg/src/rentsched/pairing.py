"""Row-level scans pairing the X and Y table columns of one boundary position.

Each scan works on value/feasibility row pairs indexed by the processing time
moved out of the window on either side. Infeasible cells are carried as a
boolean mask; the big filler constant is only ever used transiently inside
masked reductions and never stored as a table value.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

_BIG = np.int64(1) << 62

Combine = Literal["sum", "max"]


def _combined(fv: np.ndarray, gv: np.ndarray, combine: Combine) -> np.ndarray:
    return fv + gv if combine == "sum" else np.maximum(fv, gv)


def suffix_min_with_arg(
    vals: np.ndarray, ok: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per index i: the minimum of vals[i:] over feasible cells, whether any
    exists, and the smallest index attaining it."""
    masked = np.where(ok, vals, _BIG)
    suf_val = np.minimum.accumulate(masked[::-1])[::-1]
    suf_ok = np.logical_or.accumulate(ok[::-1])[::-1]
    size = len(vals)
    # A cell equal to its own suffix minimum is the first attaining index for
    # every query point at or below it.
    attains = ok & (masked == suf_val)
    pos = np.where(attains, np.arange(size), size)
    suf_arg = np.minimum.accumulate(pos[::-1])[::-1]
    return suf_val, suf_ok, suf_arg


def scan_min_cost_at_least_sum(
    fv: np.ndarray,
    fo: np.ndarray,
    gv: np.ndarray,
    go: np.ndarray,
    min_sum: int,
    combine: Combine,
) -> tuple[int, int, int] | None:
    """Minimize combine(f[r1], g[r2]) subject to r1 + r2 >= min_sum.

    Returns (cost, r1, r2) with the smallest r1 (then r2) among minima, or
    None when no pair is feasible.
    """
    g_size = len(gv)
    suf_val, suf_ok, suf_arg = suffix_min_with_arg(gv, go)
    r1 = np.arange(len(fv))
    tau = np.clip(min_sum - r1, 0, None)
    in_range = tau < g_size
    tau_c = np.minimum(tau, g_size - 1)
    valid = fo & in_range & suf_ok[tau_c]
    if not valid.any():
        return None
    cost = _combined(fv, suf_val[tau_c], combine)
    masked = np.where(valid, cost, _BIG)
    i = int(np.argmin(masked))
    return int(cost[i]), i, int(suf_arg[tau_c[i]])


def scan_max_sum_within_cost(
    fv: np.ndarray,
    fo: np.ndarray,
    gv: np.ndarray,
    go: np.ndarray,
    budget: int,
    combine: Combine,
) -> tuple[int, int, int] | None:
    """Maximize r1 + r2 subject to combine(f[r1], g[r2]) <= budget.

    Returns (r1 + r2, r1, r2) or None when even the cheapest pair exceeds the
    budget.
    """
    if combine == "max":
        # The two sides are constrained independently.
        okf = fo & (fv <= budget)
        okg = go & (gv <= budget)
        if not okf.any() or not okg.any():
            return None
        r1 = int(np.nonzero(okf)[0][-1])
        r2 = int(np.nonzero(okg)[0][-1])
        return r1 + r2, r1, r2

    # Nondominated g cells: strictly cheaper than everything to their right,
    # so values strictly increase along kept indices.
    masked = np.where(go, gv, _BIG)
    suf = np.minimum.accumulate(masked[::-1])[::-1]
    nd = go & (masked == suf)
    nd[:-1] &= masked[:-1] < suf[1:]
    kept = np.nonzero(nd)[0]
    if len(kept) == 0:
        return None
    kept_vals = gv[kept]
    rem = budget - fv
    pos = np.searchsorted(kept_vals, rem, side="right") - 1
    valid = fo & (pos >= 0)
    if not valid.any():
        return None
    sums = np.where(valid, np.arange(len(fv)) + kept[np.maximum(pos, 0)], -1)
    i = int(np.argmax(sums))
    r2 = int(kept[pos[i]])
    return int(sums[i]), i, r2


def scan_min_cost_exact_sum(
    fv: np.ndarray,
    fo: np.ndarray,
    gv: np.ndarray,
    go: np.ndarray,
    total: int,
    combine: Combine,
) -> tuple[int, int, int] | None:
    """Minimize combine(f[r1], g[r2]) subject to r1 + r2 == total."""
    lo = max(0, total - (len(gv) - 1))
    hi = min(len(fv) - 1, total)
    if hi < lo:
        return None
    r1s = np.arange(lo, hi + 1)
    r2s = total - r1s
    valid = fo[r1s] & go[r2s]
    if not valid.any():
        return None
    cost = _combined(fv[r1s], gv[r2s], combine)
    masked = np.where(valid, cost, _BIG)
    i = int(np.argmin(masked))
    return int(cost[i]), int(r1s[i]), int(r2s[i])
