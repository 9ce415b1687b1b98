"""Exact solvers for the (weighted) completion-time objectives.

The renting-budgeted, cost-budgeted and bi-objective problems all reduce to
tables of optimal prefix/suffix sets: for a boundary position kappa and a
processing time rho moved out of the window, f[kappa][rho] is the cheapest
weighted completion of the window prefix when a set X with p(X) = rho is
pulled before the window, and g[kappa][rho] the analogue for a set Y pulled
after it. Two table builders exist with identical outputs: one iterates a
fixed rho per pass, the other carries the committed complement weight as an
extra state dimension; the cheaper one is picked from the instance size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import pairing
from .errors import Infeasible
from .model import (
    Instance,
    Job,
    Mode,
    Objective,
    OrderedView,
    Pareto,
    ErBudget,
    GammaBudget,
    Composite,
    ParetoFront,
    ParetoPoint,
    Solution,
    evaluate,
    five_block_sequence,
    ordered_view,
)

_BIG = np.int64(1) << 62


@dataclass(frozen=True)
class MinCostWindowAtMost:
    """Minimize f + g over pairs whose window is at most the budget."""

    budget: int


@dataclass(frozen=True)
class MinWindowCostAtMost:
    """Minimize the window over pairs whose full-sequence cost is at most the
    budget (outer-block constants included before comparing)."""

    budget: int


@dataclass(frozen=True)
class MinCostWindowExactly:
    """Minimize f + g over pairs whose window is exactly the given length."""

    window: int


PairMode = MinCostWindowAtMost | MinWindowCostAtMost | MinCostWindowExactly


@dataclass(frozen=True)
class PairSearchResult:
    kappa: int
    rho1: int
    rho2: int
    f: int
    g: int
    window: int


@dataclass
class XYTables:
    """f/g value tables over (kappa, rho) plus set-retrieval hooks.

    kappa runs over (alpha, beta]; rho over [0, rho_max]. Infeasible cells are
    flagged in the companion boolean masks, never encoded as numbers.
    """

    view: OrderedView
    rho_max: int
    kappas: range
    f_val: np.ndarray
    f_ok: np.ndarray
    g_val: np.ndarray
    g_ok: np.ndarray
    _x_retriever: Callable[[int, int], frozenset[int]] = field(repr=False, default=None)
    _y_retriever: Callable[[int, int], frozenset[int]] = field(repr=False, default=None)

    def _index(self, kappa: int) -> int:
        if kappa not in self.kappas:
            raise IndexError(f"kappa {kappa} outside {self.kappas}")
        return kappa - self.kappas.start

    def f(self, kappa: int, rho: int) -> int | None:
        i = self._index(kappa)
        return int(self.f_val[i, rho]) if self.f_ok[i, rho] else None

    def g(self, kappa: int, rho: int) -> int | None:
        i = self._index(kappa)
        return int(self.g_val[i, rho]) if self.g_ok[i, rho] else None

    def retrieve_x(self, kappa: int, rho: int) -> frozenset[int]:
        if self.f(kappa, rho) is None:
            raise ValueError(f"no X set exists for kappa={kappa}, rho={rho}")
        return self._x_retriever(kappa, rho)

    def retrieve_y(self, kappa: int, rho: int) -> frozenset[int]:
        if self.g(kappa, rho) is None:
            raise ValueError(f"no Y set exists for kappa={kappa}, rho={rho}")
        return self._y_retriever(kappa, rho)


def _view_arrays(view: OrderedView) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    n = view.n
    p = np.zeros(n + 2, np.int64)
    w = np.zeros(n + 2, np.int64)
    in_h = np.zeros(n + 2, bool)
    for pos in range(1, n + 1):
        job = view.job_at(pos)
        p[pos] = job.p
        w[pos] = job.w
        in_h[pos] = pos in view.h
    t = np.zeros(n + 2, np.int64)
    t[1:] = view.t[1:]
    return p, w, t, in_h


def _empty_tables(view: OrderedView, rho_max: int) -> XYTables:
    def no_set(kappa: int, rho: int) -> frozenset[int]:
        raise ValueError("tables are empty: the view has no split positions")

    shape = (0, rho_max + 1)
    return XYTables(
        view=view,
        rho_max=rho_max,
        kappas=range(0),
        f_val=np.zeros(shape, np.int64),
        f_ok=np.zeros(shape, bool),
        g_val=np.zeros(shape, np.int64),
        g_ok=np.zeros(shape, bool),
        _x_retriever=no_set,
        _y_retriever=no_set,
    )


def _merge_min(
    nval: np.ndarray, nok: np.ndarray, cand: np.ndarray, cok: np.ndarray
) -> None:
    """Masked elementwise minimum of a candidate branch into (nval, nok)."""
    better = cok & (~nok | (cand < nval))
    nval[better] = cand[better]
    nok |= cok


# ---------------------------------------------------------------------------
# Fixed-rho table builder
# ---------------------------------------------------------------------------


def _x_pass_fixed_rho(p, w, t, in_h, a, b, rho, keep_stages=False):
    """One prefix pass for a fixed target rho. State: processing time of the
    X members committed so far; the cost of a job left in the window already
    accounts for the full shift rho."""
    size = rho + 1
    val = np.zeros(size, np.int64)
    ok = np.zeros(size, bool)
    ok[0] = True
    rng = np.arange(size, dtype=np.int64)
    stages = [(val, ok)]
    harvest_val = np.zeros(max(b - a, 0), np.int64)
    harvest_ok = np.zeros(max(b - a, 0), bool)
    for j in range(a, b):
        nval = val + w[j] * (t[j + 1] + rho - rng)
        nok = ok.copy()
        pj = int(p[j])
        if in_h[j] and pj <= rho:
            cand = val[: size - pj] + w[j] * (t[a] + rng[pj:])
            _merge_min(nval[pj:], nok[pj:], cand, ok[: size - pj])
        val, ok = nval, nok
        if keep_stages:
            stages.append((val, ok))
        harvest_val[j - a] = val[rho]
        harvest_ok[j - a] = ok[rho]
    return stages, harvest_val, harvest_ok


def _y_pass_fixed_rho(p, w, t, in_h, a, b, rho, keep_stages=False):
    """Mirror pass walking the window suffix downward; a job left in the
    window is pulled forward by the Y processing time committed before it."""
    size = rho + 1
    val = np.zeros(size, np.int64)
    ok = np.zeros(size, bool)
    ok[0] = True
    rng = np.arange(size, dtype=np.int64)
    stages = [(val, ok)]
    harvest_val = np.zeros(max(b - a, 0), np.int64)
    harvest_ok = np.zeros(max(b - a, 0), bool)
    for j in range(b, a, -1):
        nval = val + w[j] * (t[j + 1] - (rho - rng))
        nok = ok.copy()
        pj = int(p[j])
        if in_h[j] and pj <= rho:
            cand = val[: size - pj] + w[j] * (t[b + 1] - rng[pj:] + pj)
            _merge_min(nval[pj:], nok[pj:], cand, ok[: size - pj])
        val, ok = nval, nok
        if keep_stages:
            stages.append((val, ok))
        harvest_val[j - (a + 1)] = val[rho]
        harvest_ok[j - (a + 1)] = ok[rho]
    return stages, harvest_val, harvest_ok


def build_xy_tables_theta1(view: OrderedView, rho_max: int) -> XYTables:
    """Build the f/g tables with one pass per rho (time ~ n * P * rho_max,
    memory one rho slice at a time)."""
    if view.alpha is None or view.alpha == view.beta:
        return _empty_tables(view, rho_max)
    a, b = view.alpha, view.beta
    p, w, t, in_h = _view_arrays(view)

    nk = b - a
    f_val = np.zeros((nk, rho_max + 1), np.int64)
    f_ok = np.zeros((nk, rho_max + 1), bool)
    g_val = np.zeros((nk, rho_max + 1), np.int64)
    g_ok = np.zeros((nk, rho_max + 1), bool)
    for rho in range(rho_max + 1):
        _, hv, ho = _x_pass_fixed_rho(p, w, t, in_h, a, b, rho)
        f_val[:, rho] = hv
        f_ok[:, rho] = ho
        _, hv, ho = _y_pass_fixed_rho(p, w, t, in_h, a, b, rho)
        g_val[:, rho] = hv
        g_ok[:, rho] = ho

    def retrieve_x(kappa: int, rho: int) -> frozenset[int]:
        stages, _, _ = _x_pass_fixed_rho(p, w, t, in_h, a, b, rho, keep_stages=True)
        x: set[int] = set()
        cur_rho = rho
        cur = int(stages[kappa - a][0][cur_rho])
        for j in range(kappa - 1, a - 1, -1):
            pval, pok = stages[j - a]
            stay = int(w[j]) * int(t[j + 1] + rho - cur_rho)
            if pok[cur_rho] and cur == int(pval[cur_rho]) + stay:
                cur = int(pval[cur_rho])
            else:
                x.add(j)
                cur -= int(w[j]) * int(t[a] + cur_rho)
                cur_rho -= int(p[j])
        assert cur_rho == 0 and cur == 0
        return frozenset(x)

    def retrieve_y(kappa: int, rho: int) -> frozenset[int]:
        stages, _, _ = _y_pass_fixed_rho(p, w, t, in_h, a, b, rho, keep_stages=True)
        y: set[int] = set()
        cur_rho = rho
        cur = int(stages[b + 1 - kappa][0][cur_rho])
        for j in range(kappa, b + 1):
            pval, pok = stages[b - j]
            stay = int(w[j]) * int(t[j + 1] - (rho - cur_rho))
            if pok[cur_rho] and cur == int(pval[cur_rho]) + stay:
                cur = int(pval[cur_rho])
            else:
                y.add(j)
                cur -= int(w[j]) * int(t[b + 1] - cur_rho + p[j])
                cur_rho -= int(p[j])
        assert cur_rho == 0 and cur == 0
        return frozenset(y)

    return XYTables(view, rho_max, range(a + 1, b + 1), f_val, f_ok, g_val, g_ok,
                    retrieve_x, retrieve_y)


# ---------------------------------------------------------------------------
# Complement-weight table builder
# ---------------------------------------------------------------------------


def _x_pass_weight_state(p, w, t, in_h, a, b, rho_max, w_win, keep_stages=False):
    """Single prefix pass over states (rho committed to X, weight committed to
    the window). A window job is costed at its unshifted completion; every
    later X insertion pays the committed weight times its length."""
    shape = (rho_max + 1, w_win + 1)
    val = np.zeros(shape, np.int64)
    ok = np.zeros(shape, bool)
    ok[0, 0] = True
    rho_col = np.arange(rho_max + 1, dtype=np.int64)[:, None]
    om_row = np.arange(w_win + 1, dtype=np.int64)[None, :]
    stages = [(val, ok)]
    f_val = np.zeros((max(b - a, 0), rho_max + 1), np.int64)
    f_ok = np.zeros((max(b - a, 0), rho_max + 1), bool)
    for j in range(a, b):
        wj, pj = int(w[j]), int(p[j])
        nval = np.zeros(shape, np.int64)
        nok = np.zeros(shape, bool)
        nval[:, wj:] = val[:, : w_win + 1 - wj] + wj * t[j + 1]
        nok[:, wj:] = ok[:, : w_win + 1 - wj]
        if in_h[j] and pj <= rho_max:
            cand = val[: rho_max + 1 - pj, :] + wj * (t[a] + rho_col[pj:, :]) + om_row * pj
            _merge_min(nval[pj:, :], nok[pj:, :], cand, ok[: rho_max + 1 - pj, :])
        val, ok = nval, nok
        if keep_stages:
            stages.append((val, ok))
        masked = np.where(ok, val, _BIG)
        f_val[j - a] = masked.min(axis=1)
        f_ok[j - a] = ok.any(axis=1)
    return stages, f_val, f_ok


def _y_pass_weight_state(p, w, t, in_h, a, b, rho_max, w_win, keep_stages=False):
    shape = (rho_max + 1, w_win + 1)
    val = np.zeros(shape, np.int64)
    ok = np.zeros(shape, bool)
    ok[0, 0] = True
    rho_col = np.arange(rho_max + 1, dtype=np.int64)[:, None]
    om_row = np.arange(w_win + 1, dtype=np.int64)[None, :]
    stages = [(val, ok)]
    g_val = np.zeros((max(b - a, 0), rho_max + 1), np.int64)
    g_ok = np.zeros((max(b - a, 0), rho_max + 1), bool)
    for j in range(b, a, -1):
        wj, pj = int(w[j]), int(p[j])
        nval = np.zeros(shape, np.int64)
        nok = np.zeros(shape, bool)
        nval[:, wj:] = val[:, : w_win + 1 - wj] + wj * t[j + 1]
        nok[:, wj:] = ok[:, : w_win + 1 - wj]
        if in_h[j] and pj <= rho_max:
            cand = (
                val[: rho_max + 1 - pj, :]
                + wj * (t[b + 1] - rho_col[pj:, :] + pj)
                - om_row * pj
            )
            _merge_min(nval[pj:, :], nok[pj:, :], cand, ok[: rho_max + 1 - pj, :])
        val, ok = nval, nok
        if keep_stages:
            stages.append((val, ok))
        masked = np.where(ok, val, _BIG)
        g_val[j - (a + 1)] = masked.min(axis=1)
        g_ok[j - (a + 1)] = ok.any(axis=1)
    return stages, g_val, g_ok


def build_xy_tables_theta2(view: OrderedView, rho_max: int) -> XYTables:
    """Build the same f/g tables in one pass over (rho, committed weight)
    states (time ~ n * P * W). Values agree with build_xy_tables_theta1 cell
    for cell; retrieved sets may differ under ties."""
    if view.alpha is None or view.alpha == view.beta:
        return _empty_tables(view, rho_max)
    a, b = view.alpha, view.beta
    p, w, t, in_h = _view_arrays(view)
    w_win = int(w[a : b + 1].sum())

    _, f_val, f_ok = _x_pass_weight_state(p, w, t, in_h, a, b, rho_max, w_win)
    _, g_val, g_ok = _y_pass_weight_state(p, w, t, in_h, a, b, rho_max, w_win)

    def retrieve_x(kappa: int, rho: int) -> frozenset[int]:
        stages, _, _ = _x_pass_weight_state(
            p, w, t, in_h, a, b, rho_max, w_win, keep_stages=True
        )
        sval, sok = stages[kappa - a]
        row = np.where(sok[rho], sval[rho], _BIG)
        om = int(np.argmin(row))
        cur = int(sval[rho, om])
        cur_rho = rho
        x: set[int] = set()
        for j in range(kappa - 1, a - 1, -1):
            pval, pok = stages[j - a]
            wj, pj = int(w[j]), int(p[j])
            if (
                om >= wj
                and pok[cur_rho, om - wj]
                and cur == int(pval[cur_rho, om - wj]) + wj * int(t[j + 1])
            ):
                om -= wj
                cur = int(pval[cur_rho, om])
            else:
                x.add(j)
                cur -= wj * int(t[a] + cur_rho) + om * pj
                cur_rho -= pj
        assert cur_rho == 0 and om == 0 and cur == 0
        return frozenset(x)

    def retrieve_y(kappa: int, rho: int) -> frozenset[int]:
        stages, _, _ = _y_pass_weight_state(
            p, w, t, in_h, a, b, rho_max, w_win, keep_stages=True
        )
        sval, sok = stages[b + 1 - kappa]
        row = np.where(sok[rho], sval[rho], _BIG)
        om = int(np.argmin(row))
        cur = int(sval[rho, om])
        cur_rho = rho
        y: set[int] = set()
        for j in range(kappa, b + 1):
            pval, pok = stages[b - j]
            wj, pj = int(w[j]), int(p[j])
            if (
                om >= wj
                and pok[cur_rho, om - wj]
                and cur == int(pval[cur_rho, om - wj]) + wj * int(t[j + 1])
            ):
                om -= wj
                cur = int(pval[cur_rho, om])
            else:
                y.add(j)
                cur -= wj * int(t[b + 1] - cur_rho + pj) - om * pj
                cur_rho -= pj
        assert cur_rho == 0 and om == 0 and cur == 0
        return frozenset(y)

    return XYTables(view, rho_max, range(a + 1, b + 1), f_val, f_ok, g_val, g_ok,
                    retrieve_x, retrieve_y)


# ---------------------------------------------------------------------------
# Pair search and solvers
# ---------------------------------------------------------------------------


def outer_twc_const(view: OrderedView) -> int:
    """Weighted completion of the blocks outside [alpha, beta]; identical in
    every block sequence."""
    if view.alpha is None:
        return 0
    outer = list(range(1, view.alpha)) + list(range(view.beta + 1, view.n + 1))
    return sum(view.w_at(pos) * view.t[pos + 1] for pos in outer)


def _h_processing(view: OrderedView) -> int:
    return sum(view.p_at(pos) for pos in view.h)


def _pick_builder(instance: Instance):
    if instance.total_p <= instance.total_w:
        return build_xy_tables_theta1
    return build_xy_tables_theta2


def pair_search(tables: XYTables, view: OrderedView, mode: PairMode) -> PairSearchResult:
    """Scan all boundary positions for the optimal (kappa, rho1, rho2) tuple.

    Ties resolve to the smallest kappa, then rho1, then rho2.
    """
    if len(tables.kappas) == 0:
        raise Infeasible("the window admits no split positions")
    window_total = view.window_p()
    best: tuple[int, int, int, int] | None = None

    for kappa in tables.kappas:
        i = kappa - tables.kappas.start
        fv, fo = tables.f_val[i], tables.f_ok[i]
        gv, go = tables.g_val[i], tables.g_ok[i]
        if isinstance(mode, MinCostWindowAtMost):
            hit = pairing.scan_min_cost_at_least_sum(
                fv, fo, gv, go, window_total - mode.budget, "sum"
            )
        elif isinstance(mode, MinWindowCostAtMost):
            hit = pairing.scan_max_sum_within_cost(
                fv, fo, gv, go, mode.budget - outer_twc_const(view), "sum"
            )
            if hit is not None:
                total, r1, r2 = hit
                hit = (-total, r1, r2)  # larger sum = smaller window
        else:
            hit = pairing.scan_min_cost_exact_sum(
                fv, fo, gv, go, window_total - mode.window, "sum"
            )
        if hit is None:
            continue
        key, r1, r2 = hit
        if best is None or key < best[0]:
            best = (key, kappa, r1, r2)

    if best is None:
        raise Infeasible(f"no (kappa, rho1, rho2) tuple satisfies {mode}")
    _, kappa, r1, r2 = best
    return PairSearchResult(
        kappa=kappa,
        rho1=r1,
        rho2=r2,
        f=tables.f(kappa, r1),
        g=tables.g(kappa, r2),
        window=window_total - r1 - r2,
    )


def _assembled_solution(
    instance: Instance, view: OrderedView, tables: XYTables, res: PairSearchResult
) -> Solution:
    x = tables.retrieve_x(res.kappa, res.rho1)
    y = tables.retrieve_y(res.kappa, res.rho2)
    seq = five_block_sequence(view, x, y)
    return Solution(sequence=seq, metrics=evaluate(instance, seq))


def _view_order_solution(instance: Instance, view: OrderedView) -> Solution:
    return Solution(sequence=view.order, metrics=evaluate(instance, view.order))


def _check_er_budget(instance: Instance, budget: int) -> None:
    floor = instance.p_of(instance.r_ids) if instance.r_ids else 0
    if budget < floor:
        raise Infeasible(f"renting budget {budget} is below the lower bound {floor}")


def solve_er_budget_twc(instance: Instance, budget: int) -> Solution:
    """Minimum total weighted completion time with renting period <= budget."""
    _check_er_budget(instance, budget)
    view = ordered_view(instance, "wspt")
    if view.alpha is None or view.alpha == view.beta or budget >= view.window_p():
        return _view_order_solution(instance, view)  # the budget cannot bind
    tables = _pick_builder(instance)(view, _h_processing(view))
    res = pair_search(tables, view, MinCostWindowAtMost(budget))
    sol = _assembled_solution(instance, view, tables, res)
    assert sol.metrics.er <= budget
    return sol


def solve_twc_budget_er(instance: Instance, budget: int) -> Solution:
    """Minimum renting period with total weighted completion time <= budget."""
    view = ordered_view(instance, "wspt")
    base = _view_order_solution(instance, view)
    if base.metrics.twc > budget:
        raise Infeasible(
            f"unconstrained optimum {base.metrics.twc} already exceeds {budget}"
        )
    if view.alpha is None or view.alpha == view.beta or not view.h:
        return base  # the renting period is the same in every useful sequence
    tables = _pick_builder(instance)(view, _h_processing(view))
    res = pair_search(tables, view, MinWindowCostAtMost(budget))
    sol = _assembled_solution(instance, view, tables, res)
    assert sol.metrics.twc <= budget and sol.metrics.er == res.window
    return sol


def pareto_twc(instance: Instance) -> ParetoFront:
    """Nondominated (renting period, weighted completion) points."""
    return _pareto(instance, Objective.TWC)


def _pareto(instance: Instance, objective: Objective) -> ParetoFront:
    view = ordered_view(instance, "wspt")
    if view.alpha is None or view.alpha == view.beta or not view.h:
        m = evaluate(instance, view.order)
        point = ParetoPoint(er=m.er, gamma=m.gamma(objective), sequence=view.order)
        return ParetoFront(objective=objective, points=(point,))

    tables = _pick_builder(instance)(view, _h_processing(view))
    window_total = view.window_p()
    outer = outer_twc_const(view)
    p_resource = window_total - _h_processing(view)

    points: list[ParetoPoint] = []
    best: int | None = None
    for window in range(p_resource, window_total + 1):
        try:
            res = pair_search(tables, view, MinCostWindowExactly(window))
        except Infeasible:
            continue
        total = res.f + res.g + outer
        if best is not None and total >= best:
            continue
        sol = _assembled_solution(instance, view, tables, res)
        assert sol.metrics.er == window and sol.metrics.twc == total
        points.append(
            ParetoPoint(er=window, gamma=sol.metrics.gamma(objective), sequence=sol.sequence)
        )
        best = total
    return ParetoFront(objective=objective, points=tuple(points))


def _unit_weights(instance: Instance) -> Instance:
    return Instance(
        tuple(
            Job(id=job.id, p=job.p, w=1, d=job.d, needs_resource=job.needs_resource)
            for job in instance.jobs
        )
    )


def solve_tc_variants(instance: Instance, mode: Mode) -> Solution | ParetoFront:
    """Total-completion-time problems: the weighted solvers on unit weights."""
    unit = _unit_weights(instance)
    if isinstance(mode, ErBudget):
        sol = solve_er_budget_twc(unit, mode.budget)
    elif isinstance(mode, GammaBudget):
        sol = solve_twc_budget_er(unit, mode.budget)
    elif isinstance(mode, Composite):
        from .composite import solve_composite_twc

        sol = solve_composite_twc(unit, mode.rental_rate)
    elif isinstance(mode, Pareto):
        front = _pareto(unit, Objective.TC)
        return ParetoFront(
            objective=Objective.TC,
            points=tuple(
                ParetoPoint(
                    er=pt.er,
                    gamma=evaluate(instance, pt.sequence).tc,
                    sequence=pt.sequence,
                )
                for pt in front.points
            ),
        )
    else:
        raise TypeError(f"unknown mode {mode!r}")
    return Solution(sequence=sol.sequence, metrics=evaluate(instance, sol.sequence))
