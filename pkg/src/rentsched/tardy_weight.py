"""Exact solvers for the weighted-number-of-tardy-jobs objectives.

An optimal schedule splits into on-time blocks X (before the window), Y
(window prefix plus window r-jobs), Z (after the window) and the tardy rest.
For a guessed X-length t, a four-dimensional recursion tracks the processing
time committed to X, to the window prefix Y', and to its o-job part; two
classic suffix recursions pick the best on-time r-jobs inside and o-jobs
after the window. Only the per-(boundary, t) frontier rows needed for
assembly are persisted; witness sets are recovered by re-running the single
relevant t-slice with recorded choices.

Running time grows with the fourth power of the total processing time, so
instances above a configurable cap are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, TooLarge
from .model import (
    Instance,
    Objective,
    OrderedView,
    ParetoFront,
    ParetoPoint,
    Solution,
    evaluate,
    ordered_view,
    tardy_block_sequence,
)

_BIG = np.int64(1) << 62

DEFAULT_P_CAP = 64


def _position_arrays(view: OrderedView):
    n = view.n
    p = np.zeros(n + 1, np.int64)
    w = np.zeros(n + 1, np.int64)
    d = np.zeros(n + 1, np.int64)
    is_r = np.zeros(n + 1, bool)
    for pos in range(1, n + 1):
        job = view.job_at(pos)
        p[pos], w[pos], d[pos], is_r[pos] = job.p, job.w, job.d, job.needs_resource
    return p, w, d, is_r


def _subset_sums(values) -> list[int]:
    sums = {0}
    for v in values:
        sums |= {s + v for s in sums}
    return sorted(sums)


def _merge_max(nval, nok, cand, cok) -> None:
    better = cok & (~nok | (cand > nval))
    nval[better] = cand[better]
    nok |= cok


# ---------------------------------------------------------------------------
# Suffix recursions (classic on-time selection from a fixed offset)
# ---------------------------------------------------------------------------


def _suffix_values(p, w, d, mask, n, smax) -> np.ndarray:
    """val[j][s] = max weight of an on-time subset of masked positions >= j
    when the first of them starts at time s."""
    val = np.zeros((n + 2, smax + 1), np.int64)
    for j in range(n, 0, -1):
        val[j] = val[j + 1]
        if mask[j]:
            pj, dj, wj = int(p[j]), int(d[j]), int(w[j])
            hi = min(dj, smax) - pj
            if hi >= 0:
                seg = val[j, : hi + 1]
                np.maximum(seg, wj + val[j + 1, pj : hi + pj + 1], out=seg)
    return val


def _suffix_set(val, p, w, d, mask, n, smax, start, offset) -> frozenset[int]:
    """Recover one optimal subset; skipping wins ties."""
    s = offset
    out: set[int] = set()
    for j in range(start, n + 1):
        if val[j, s] == val[j + 1, s]:
            continue
        pj = int(p[j])
        assert mask[j] and s + pj <= min(int(d[j]), smax)
        assert val[j, s] == int(w[j]) + val[j + 1, s + pj]
        out.add(j)
        s += pj
    return frozenset(out)


def suffix_ontime_dp(
    view_edd: OrderedView, job_filter: str, offset: int
) -> dict[int, tuple[int, frozenset[int]]]:
    """Optimal on-time sets of r-only or o-only positions, per start position.

    For every kappa in 1..n+1, returns the maximum weight and one witness set
    of filtered positions >= kappa whose members all finish by their due date
    when processed back to back from the given offset.
    """
    if job_filter not in ("r", "o"):
        raise ValueError("job_filter must be 'r' or 'o'")
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    p, w, d, is_r = _position_arrays(view_edd)
    mask = is_r if job_filter == "r" else ~is_r
    mask = mask.copy()
    mask[0] = False
    n = view_edd.n
    smax = offset + int(p[mask].sum())
    val = _suffix_values(p, w, d, mask, n, smax)
    out: dict[int, tuple[int, frozenset[int]]] = {}
    for kappa in range(1, n + 2):
        chosen = _suffix_set(val, p, w, d, mask, n, smax, kappa, offset)
        out[kappa] = (int(val[kappa, offset]), chosen)
    return out


# ---------------------------------------------------------------------------
# The guessed-t recursion
# ---------------------------------------------------------------------------


def _theta5_stages(p, w, d, is_r, last_job, t, rho_max, rhp_max, rpp_max, record=False):
    """Run the fixed-t recursion over jobs 1..last_job.

    Only the rho = t slice feeds the assembly, so callers normally bound the
    first state dimension by t; the recursion itself is valid for any bound.
    Yields (j, val, ok) after every stage, starting with stage 0. When
    ``record`` is set, also yields the per-stage choice array (0 skip, 1 into
    X, 2 o-job into Y', 3 r-job into Y')."""
    shape = (rho_max + 1, rhp_max + 1, rpp_max + 1)
    val = np.zeros(shape, np.int64)
    ok = np.zeros(shape, bool)
    ok[0, 0, 0] = True
    yield (0, val, ok, None)
    for j in range(1, last_job + 1):
        pj, wj, dj = int(p[j]), int(w[j]), int(d[j])
        nval = val.copy()
        nok = ok.copy()
        choice = np.zeros(shape, np.uint8) if record else None

        def merge(target_val, target_ok, cand, cok, code, tsel):
            if record:
                better = cok & (~target_ok | (cand > target_val))
                choice[tsel][better] = code
            _merge_max(target_val, target_ok, cand, cok)

        if not is_r[j]:
            hi = min(rho_max, dj)
            if pj <= hi:
                sel = (slice(pj, hi + 1), slice(None), slice(None))
                src = (slice(0, hi - pj + 1), slice(None), slice(None))
                merge(nval[sel], nok[sel], val[src] + wj, ok[src], 1, sel)
            hi2 = min(rhp_max, dj - t)
            if 0 <= hi2 and pj <= hi2 and pj <= rpp_max:
                sel = (slice(None), slice(pj, hi2 + 1), slice(pj, rpp_max + 1))
                src = (slice(None), slice(0, hi2 - pj + 1), slice(0, rpp_max - pj + 1))
                merge(nval[sel], nok[sel], val[src] + wj, ok[src], 2, sel)
        else:
            hi2 = min(rhp_max, dj - t)
            if 0 <= hi2 and pj <= hi2:
                sel = (slice(None), slice(pj, hi2 + 1), slice(None))
                src = (slice(None), slice(0, hi2 - pj + 1), slice(None))
                merge(nval[sel], nok[sel], val[src] + wj, ok[src], 3, sel)

        val, ok = nval, nok
        yield (j, val, ok, choice)


@dataclass
class TardyTables:
    """Per-(boundary, t) assembly rows plus the two suffix tables."""

    view: OrderedView
    k_r: int
    p_r: int
    cap: int
    t_max: int
    total_p: int
    m_val: np.ndarray  # (n+1, t_max+1, cap+1): best theta5 + on-time r-suffix
    m_ok: np.ndarray
    m_arg: np.ndarray  # argmax over the folded-away Y' processing time
    suffix_r: np.ndarray = field(repr=False)
    suffix_o: np.ndarray = field(repr=False)
    _p: np.ndarray = field(repr=False)
    _w: np.ndarray = field(repr=False)
    _d: np.ndarray = field(repr=False)
    _is_r: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.view.n


def build_theta5(view_edd: OrderedView, k_r: int) -> TardyTables:
    """Build the assembly rows for every boundary position and every guessed
    X-length t, with the o-job share of Y' capped by the renting budget."""
    p, w, d, is_r = _position_arrays(view_edd)
    n = view_edd.n
    total_p = int(p.sum())
    p_r = int(p[is_r].sum())
    if k_r < p_r:
        raise Infeasible(f"renting budget {k_r} is below the lower bound {p_r}")
    t_max = total_p - p_r  # p(X) never exceeds the o-job processing time
    cap = min(k_r - p_r, t_max)

    suffix_r = _suffix_values(p, w, d, is_r, n, total_p)
    o_mask = ~is_r
    o_mask[0] = False
    suffix_o = _suffix_values(p, w, d, o_mask, n, total_p)

    m_val = np.zeros((n + 1, t_max + 1, cap + 1), np.int64)
    m_ok = np.zeros((n + 1, t_max + 1, cap + 1), bool)
    m_arg = np.zeros((n + 1, t_max + 1, cap + 1), np.int32)

    achievable_t = set(_subset_sums([int(p[j]) for j in range(1, n + 1) if not is_r[j]]))
    for t in range(t_max + 1):
        if t not in achievable_t:
            continue
        rhp_max = total_p - t
        rpp_max = min(cap, rhp_max)
        for j, val, ok, _ in _theta5_stages(p, w, d, is_r, n, t, t, rhp_max, rpp_max):
            kappa = j + 1
            row_val = val[t]
            row_ok = ok[t]
            if not row_ok.any():
                continue
            gr = suffix_r[kappa, t : t + rhp_max + 1]
            masked = np.where(row_ok, row_val + gr[:, None], -_BIG)
            m_val[kappa - 1, t, : rpp_max + 1] = masked.max(axis=0)
            m_arg[kappa - 1, t, : rpp_max + 1] = masked.argmax(axis=0)
            m_ok[kappa - 1, t, : rpp_max + 1] = row_ok.any(axis=0)

    return TardyTables(
        view=view_edd,
        k_r=k_r,
        p_r=p_r,
        cap=cap,
        t_max=t_max,
        total_p=total_p,
        m_val=m_val,
        m_ok=m_ok,
        m_arg=m_arg,
        suffix_r=suffix_r,
        suffix_o=suffix_o,
        _p=p,
        _w=w,
        _d=d,
        _is_r=is_r,
    )


def _assemble(tables: TardyTables, budget: int) -> tuple[int, tuple[int, int, int, int]]:
    """Best on-time weight under the given renting budget, with its
    (kappa, t, rho', rho'') witness key. Ties break to the lexicographically
    smallest key."""
    capb = min(tables.cap, budget - tables.p_r)
    if capb < 0:
        raise Infeasible(f"renting budget {budget} is below the lower bound {tables.p_r}")
    best: tuple[int, int, int, int] | None = None
    total_p = tables.total_p
    for kappa in range(1, tables.n + 2):
        vals = tables.m_val[kappa - 1][:, : capb + 1]
        oks = tables.m_ok[kappa - 1][:, : capb + 1]
        if not oks.any():
            continue
        go = tables.suffix_o[kappa]
        pos = np.arange(vals.shape[0])[:, None] + tables.p_r + np.arange(vals.shape[1])[None, :]
        cand = vals + go[np.minimum(pos, total_p)]
        masked = np.where(oks & (pos <= total_p), cand, -_BIG)
        flat = int(masked.argmax())
        ti, ri = divmod(flat, vals.shape[1])
        v = int(masked[ti, ri])
        if v < -(_BIG // 2):
            continue
        if best is None or v > best[0]:
            best = (v, kappa, ti, ri)
    assert best is not None  # the empty selection is always feasible
    v, kappa, t, rpp = best
    rp = int(tables.m_arg[kappa - 1][t, rpp])
    return v, (kappa, t, rp, rpp)


def _witness_sets(tables: TardyTables, key: tuple[int, int, int, int]):
    """Recover (X, Y', Y'', Z) as position sets for an assembly key."""
    kappa, t, rp, rpp = key
    p, w, d, is_r = tables._p, tables._w, tables._d, tables._is_r
    stages = list(
        _theta5_stages(p, w, d, is_r, kappa - 1, t, t, rp, rpp, record=True)
    )
    x: set[int] = set()
    yp: set[int] = set()
    ct, cp, cpp = t, rp, rpp
    for j in range(kappa - 1, 0, -1):
        _, _, _, choice = stages[j]
        code = int(choice[ct, cp, cpp])
        pj = int(p[j])
        if code == 1:
            x.add(j)
            ct -= pj
        elif code == 2:
            yp.add(j)
            cp -= pj
            cpp -= pj
        elif code == 3:
            yp.add(j)
            cp -= pj
    assert (ct, cp, cpp) == (0, 0, 0)

    n = tables.n
    ypp = _suffix_set(
        tables.suffix_r, p, w, d, is_r, n, tables.total_p, kappa, t + rp
    )
    o_mask = ~is_r
    o_mask[0] = False
    z = _suffix_set(
        tables.suffix_o, p, w, d, o_mask, n, tables.total_p, kappa, t + tables.p_r + rpp
    )
    return x, yp, ypp, z


def _sets_to_solution(
    instance: Instance, view: OrderedView, x, yp, ypp, z
) -> Solution:
    to_ids = lambda positions: {view.id_at(pos) for pos in positions}
    seq = tardy_block_sequence(view, to_ids(x), to_ids(yp | ypp), to_ids(z))
    return Solution(sequence=seq, metrics=evaluate(instance, seq))


def _check_p_cap(instance: Instance, p_cap: int) -> None:
    if instance.total_p > p_cap:
        raise TooLarge(
            f"total processing time {instance.total_p} exceeds the solver cap "
            f"{p_cap}; raise p_cap to force the run"
        )


def _classic_solution(instance: Instance, view: OrderedView) -> Solution:
    """No r-jobs: plain max-weight on-time selection over all positions."""
    p, w, d, is_r = _position_arrays(view)
    mask = np.ones(view.n + 1, bool)
    mask[0] = False
    smax = int(instance.total_p)
    val = _suffix_values(p, w, d, mask, view.n, smax)
    chosen = _suffix_set(val, p, w, d, mask, view.n, smax, 1, 0)
    ids = {view.id_at(pos) for pos in chosen}
    seq = tardy_block_sequence(view, ids, set(), set())
    sol = Solution(sequence=seq, metrics=evaluate(instance, seq))
    assert sol.metrics.wtardy == instance.total_w - int(val[1, 0])
    return sol


def solve_er_budget_wu(
    instance: Instance, budget: int, p_cap: int = DEFAULT_P_CAP
) -> Solution:
    """Minimum weighted number of tardy jobs with renting period <= budget."""
    _check_p_cap(instance, p_cap)
    view = ordered_view(instance, "edd")
    if not instance.r_ids:
        if budget < 0:
            raise Infeasible(f"renting budget {budget} is below the lower bound 0")
        return _classic_solution(instance, view)
    tables = build_theta5(view, budget)
    value, key = _assemble(tables, budget)
    sol = _sets_to_solution(instance, view, *_witness_sets(tables, key))
    assert sol.metrics.er <= budget
    assert sol.metrics.wtardy == instance.total_w - value
    return sol


def solve_wu_budget_er(
    instance: Instance, budget: int, p_cap: int = DEFAULT_P_CAP
) -> Solution:
    """Minimum renting period with weighted tardy cost <= budget, by binary
    search on the renting budget."""
    _check_p_cap(instance, p_cap)
    view = ordered_view(instance, "edd")
    total_w = instance.total_w
    if not instance.r_ids:
        sol = _classic_solution(instance, view)
        if sol.metrics.wtardy > budget:
            raise Infeasible(
                f"unconstrained optimum {sol.metrics.wtardy} already exceeds {budget}"
            )
        return sol

    p_r = instance.p_of(instance.r_ids)
    total_p = instance.total_p
    tables = build_theta5(view, total_p)

    def tardy_at(k: int) -> int:
        return total_w - _assemble(tables, k)[0]

    if tardy_at(total_p) > budget:
        raise Infeasible(
            f"unconstrained optimum {tardy_at(total_p)} already exceeds {budget}"
        )
    lo, hi = p_r, total_p
    while lo < hi:
        mid = (lo + hi) // 2
        if tardy_at(mid) <= budget:
            hi = mid
        else:
            lo = mid + 1
    value, key = _assemble(tables, lo)
    sol = _sets_to_solution(instance, view, *_witness_sets(tables, key))
    assert sol.metrics.wtardy <= budget and sol.metrics.er == lo
    return sol


def pareto_wu(instance: Instance, p_cap: int = DEFAULT_P_CAP) -> ParetoFront:
    """Nondominated (renting period, weighted tardy cost) points: one budget
    probe per achievable window length, sharing a single table build."""
    _check_p_cap(instance, p_cap)
    view = ordered_view(instance, "edd")
    if not instance.r_ids:
        sol = _classic_solution(instance, view)
        point = ParetoPoint(er=0, gamma=sol.metrics.wtardy, sequence=sol.sequence)
        return ParetoFront(objective=Objective.WU, points=(point,))

    p_r = instance.p_of(instance.r_ids)
    tables = build_theta5(view, instance.total_p)
    o_p = [instance.job(i).p for i in instance.o_ids]
    budgets = [p_r + s for s in _subset_sums(o_p)]

    points: list[ParetoPoint] = []
    best: int | None = None
    for k in budgets:
        value, key = _assemble(tables, k)
        tardy = instance.total_w - value
        if best is not None and tardy >= best:
            continue
        sol = _sets_to_solution(instance, view, *_witness_sets(tables, key))
        assert sol.metrics.er == k and sol.metrics.wtardy == tardy
        points.append(ParetoPoint(er=k, gamma=tardy, sequence=sol.sequence))
        best = tardy
    return ParetoFront(objective=Objective.WU, points=tuple(points))
