"""Exact solvers for the maximum-lateness objectives.

Same block decomposition as the weighted-completion solvers, but over an EDD
view and with lateness tables that combine by maximum: th3[kappa][rho] is the
best achievable maximum lateness of the window prefix when a set X with
p(X) = rho moves before the window, th4 the suffix analogue for Y. Both
tables fall out of one O(n * P) pass each because a job joining X shifts every
prefix lateness by exactly its processing time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pairing
from .errors import Infeasible
from .model import (
    Instance,
    Objective,
    OrderedView,
    ParetoFront,
    ParetoPoint,
    Solution,
    evaluate,
    five_block_sequence,
    ordered_view,
)

_BIG = np.int64(1) << 62


@dataclass
class LmaxTables:
    """Signed lateness tables over (kappa, rho); kappa in (alpha, beta]."""

    view: OrderedView
    rho_max: int
    kappas: range
    th3_val: np.ndarray
    th3_ok: np.ndarray
    th4_val: np.ndarray
    th4_ok: np.ndarray

    def _index(self, kappa: int) -> int:
        if kappa not in self.kappas:
            raise IndexError(f"kappa {kappa} outside {self.kappas}")
        return kappa - self.kappas.start

    def th3(self, kappa: int, rho: int) -> int | None:
        i = self._index(kappa)
        return int(self.th3_val[i, rho]) if self.th3_ok[i, rho] else None

    def th4(self, kappa: int, rho: int) -> int | None:
        i = self._index(kappa)
        return int(self.th4_val[i, rho]) if self.th4_ok[i, rho] else None

    def retrieve_x(self, kappa: int, rho: int) -> frozenset[int]:
        """Walk the prefix table backward from (kappa, rho); stays win ties."""
        view = self.view
        a = view.alpha
        x: set[int] = set()
        cur_rho = rho
        cur = self.th3(kappa, rho)
        if cur is None:
            raise ValueError(f"no X set exists for kappa={kappa}, rho={rho}")
        for k in range(kappa, a + 1, -1):
            j = k - 1  # the job decided between rows k-1 and k
            prev = self.th3(k - 1, cur_rho)
            if prev is not None and cur == max(prev, view.t[j + 1] - view.d_at(j)):
                cur = prev
            else:
                x.add(j)
                cur_rho -= view.p_at(j)
                prev = self.th3(k - 1, cur_rho)
                assert prev is not None and cur == prev + view.p_at(j)
                cur = prev
        assert cur_rho == 0
        return frozenset(x)

    def retrieve_y(self, kappa: int, rho: int) -> frozenset[int]:
        view = self.view
        b = view.beta
        y: set[int] = set()
        cur_rho = rho
        cur = self.th4(kappa, rho)
        if cur is None:
            raise ValueError(f"no Y set exists for kappa={kappa}, rho={rho}")
        for j in range(kappa, b):
            nxt = self.th4(j + 1, cur_rho)
            if nxt is not None and cur == max(nxt, view.t[j + 1] - view.d_at(j)):
                cur = nxt
            else:
                y.add(j)
                cur_rho -= view.p_at(j)
                nxt = self.th4(j + 1, cur_rho)
                assert nxt is not None and cur == max(
                    nxt, view.t[b + 1] - cur_rho - view.d_at(j)
                )
                cur = nxt
        assert cur_rho == 0
        return frozenset(y)


def _h_processing(view: OrderedView) -> int:
    return sum(view.p_at(pos) for pos in view.h)


def build_lmax_tables(view: OrderedView) -> LmaxTables:
    """Both lateness tables for every (kappa, rho) in one pass each."""
    a, b = view.alpha, view.beta
    rho_max = _h_processing(view)
    if a is None or a == b:
        shape = (0, rho_max + 1)
        return LmaxTables(view, rho_max, range(0),
                          np.zeros(shape, np.int64), np.zeros(shape, bool),
                          np.zeros(shape, np.int64), np.zeros(shape, bool))

    n_rows = b - a
    size = rho_max + 1
    t = np.zeros(view.n + 2, np.int64)
    t[1:] = view.t[1:]
    p = [0] + [view.p_at(pos) for pos in range(1, view.n + 1)]
    d = [0] + [view.d_at(pos) for pos in range(1, view.n + 1)]

    th3_val = np.zeros((n_rows, size), np.int64)
    th3_ok = np.zeros((n_rows, size), bool)
    th3_val[0, 0] = t[a + 1] - d[a]
    th3_ok[0, 0] = True
    for k in range(a + 1, b):
        i = k - (a + 1)
        stay = np.maximum(th3_val[i], t[k + 1] - d[k])
        nval, nok = stay, th3_ok[i].copy()
        if k in view.h and p[k] <= rho_max:
            pk = p[k]
            cand = th3_val[i, : size - pk] + pk
            cok = th3_ok[i, : size - pk]
            seg, seg_ok = nval[pk:], nok[pk:]
            better = cok & (~seg_ok | (cand < seg))
            seg[better] = cand[better]
            seg_ok |= cok
        th3_val[i + 1], th3_ok[i + 1] = nval, nok

    th4_val = np.zeros((n_rows, size), np.int64)
    th4_ok = np.zeros((n_rows, size), bool)
    last = b - (a + 1)
    th4_val[last, 0] = t[b + 1] - d[b]
    th4_ok[last, 0] = True
    rng = np.arange(size, dtype=np.int64)
    for k in range(b - 1, a, -1):
        i = k - (a + 1)
        nxt_val, nxt_ok = th4_val[i + 1], th4_ok[i + 1]
        nval = np.maximum(nxt_val, t[k + 1] - d[k])
        nok = nxt_ok.copy()
        if k in view.h and p[k] <= rho_max:
            pk = p[k]
            cand = np.maximum(nxt_val[: size - pk], t[b + 1] - rng[: size - pk] - d[k])
            cok = nxt_ok[: size - pk]
            seg, seg_ok = nval[pk:], nok[pk:]
            better = cok & (~seg_ok | (cand < seg))
            seg[better] = cand[better]
            seg_ok |= cok
        th4_val[i], th4_ok[i] = nval, nok

    return LmaxTables(view, rho_max, range(a + 1, b + 1),
                      th3_val, th3_ok, th4_val, th4_ok)


def _outer_lmax(view: OrderedView) -> int | None:
    """Largest lateness among the jobs outside [alpha, beta]; None if none."""
    outer = list(range(1, view.alpha)) + list(range(view.beta + 1, view.n + 1))
    if not outer:
        return None
    return max(view.t[pos + 1] - view.d_at(pos) for pos in outer)


def _full_value(middle: int, outer: int | None) -> int:
    return middle if outer is None else max(middle, outer)


def _scan(tables: LmaxTables, mode: str, bound: int) -> tuple[int, int, int, int] | None:
    """Best tuple over every kappa; returns (key, kappa, rho1, rho2)."""
    best: tuple[int, int, int, int] | None = None
    for kappa in tables.kappas:
        i = kappa - tables.kappas.start
        fv, fo = tables.th3_val[i], tables.th3_ok[i]
        gv, go = tables.th4_val[i], tables.th4_ok[i]
        if mode == "cost_at_most_window":
            hit = pairing.scan_min_cost_at_least_sum(fv, fo, gv, go, bound, "max")
        elif mode == "window_at_most_cost":
            hit = pairing.scan_max_sum_within_cost(fv, fo, gv, go, bound, "max")
            if hit is not None:
                total, r1, r2 = hit
                hit = (-total, r1, r2)
        else:  # exact window
            hit = pairing.scan_min_cost_exact_sum(fv, fo, gv, go, bound, "max")
        if hit is None:
            continue
        key, r1, r2 = hit
        if best is None or key < best[0]:
            best = (key, kappa, r1, r2)
    return best


def _assemble(instance: Instance, view: OrderedView, tables: LmaxTables,
              kappa: int, rho1: int, rho2: int) -> Solution:
    x = tables.retrieve_x(kappa, rho1)
    y = tables.retrieve_y(kappa, rho2)
    seq = five_block_sequence(view, x, y)
    return Solution(sequence=seq, metrics=evaluate(instance, seq))


def solve_er_budget_lmax(instance: Instance, budget: int) -> Solution:
    """Minimum maximum lateness with renting period <= budget."""
    floor = instance.p_of(instance.r_ids) if instance.r_ids else 0
    if budget < floor:
        raise Infeasible(f"renting budget {budget} is below the lower bound {floor}")
    view = ordered_view(instance, "edd")
    if view.alpha is None or view.alpha == view.beta or budget >= view.window_p():
        return Solution(view.order, evaluate(instance, view.order))
    tables = build_lmax_tables(view)
    hit = _scan(tables, "cost_at_most_window", view.window_p() - budget)
    if hit is None:
        raise Infeasible(f"no block split respects the renting budget {budget}")
    _, kappa, rho1, rho2 = hit
    sol = _assemble(instance, view, tables, kappa, rho1, rho2)
    assert sol.metrics.er <= budget
    return sol


def solve_lmax_budget_er(instance: Instance, budget: int) -> Solution:
    """Minimum renting period with maximum lateness <= budget.

    Prefix and suffix latenesses combine with the window parts by maximum, so
    the budget applies to each side separately.
    """
    view = ordered_view(instance, "edd")
    base = Solution(view.order, evaluate(instance, view.order))
    if base.metrics.lmax > budget:
        raise Infeasible(
            f"unconstrained optimum {base.metrics.lmax} already exceeds {budget}"
        )
    if view.alpha is None or view.alpha == view.beta or not view.h:
        return base
    tables = build_lmax_tables(view)
    hit = _scan(tables, "window_at_most_cost", budget)
    if hit is None:  # cannot happen once the EDD order itself is feasible
        raise Infeasible(f"no block split keeps maximum lateness within {budget}")
    _, kappa, rho1, rho2 = hit
    sol = _assemble(instance, view, tables, kappa, rho1, rho2)
    assert sol.metrics.lmax <= budget
    return sol


def pareto_lmax(instance: Instance) -> ParetoFront:
    """Nondominated (renting period, maximum lateness) points."""
    view = ordered_view(instance, "edd")
    if view.alpha is None or view.alpha == view.beta or not view.h:
        m = evaluate(instance, view.order)
        point = ParetoPoint(er=m.er, gamma=m.lmax, sequence=view.order)
        return ParetoFront(objective=Objective.LMAX, points=(point,))

    tables = build_lmax_tables(view)
    window_total = view.window_p()
    outer = _outer_lmax(view)
    p_resource = window_total - _h_processing(view)

    points: list[ParetoPoint] = []
    best: int | None = None
    for window in range(p_resource, window_total + 1):
        hit = _scan(tables, "exact", window_total - window)
        if hit is None:
            continue
        middle, kappa, rho1, rho2 = hit
        value = _full_value(middle, outer)
        if best is not None and value >= best:
            continue
        sol = _assemble(instance, view, tables, kappa, rho1, rho2)
        assert sol.metrics.er == window and sol.metrics.lmax == value
        points.append(ParetoPoint(er=window, gamma=value, sequence=sol.sequence))
        best = value
    return ParetoFront(objective=Objective.LMAX, points=tuple(points))
