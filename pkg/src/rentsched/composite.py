"""Solvers for the combined objective: scheduling cost plus a linear rental
cost per unit of renting period.

For (weighted) completion time the optimal sequence has a closed form: a job
between the extreme r-jobs moves before the window when its weight-to-length
ratio beats the r-jobs preceding it discounted by the rental rate, and after
it in the mirrored case; an aggregate-ratio tiebreaker keeps the two sets
disjoint. All comparisons use exact integer cross-products, so the rate may
be an integer or an exact rational. For maximum lateness and weighted tardy
cost the optimum is found by enumerating the corresponding Pareto front.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .max_lateness import pareto_lmax
from .model import (
    Instance,
    Objective,
    OrderedView,
    Solution,
    evaluate,
    five_block_sequence,
    ordered_view,
)
from .tardy_weight import DEFAULT_P_CAP, pareto_wu

Rate = int | Fraction


@dataclass(frozen=True)
class LambdaSets:
    """The before/after-window position sets for one rental rate."""

    rental_rate: Rate
    x: frozenset[int]
    y: frozenset[int]


def _r_prefix_sums(view: OrderedView) -> tuple[dict[int, int], dict[int, int]]:
    """Cumulative p and w of the r-jobs at positions alpha..pos."""
    acc_p: dict[int, int] = {}
    acc_w: dict[int, int] = {}
    run_p = run_w = 0
    for pos in range(view.alpha, view.beta + 1):
        if view.is_r(pos):
            run_p += view.p_at(pos)
            run_w += view.w_at(pos)
        acc_p[pos] = run_p
        acc_w[pos] = run_w
    return acc_p, acc_w


def lambda_sets(view_wspt: OrderedView, rental_rate: Rate) -> LambdaSets:
    """Evaluate the closed-form membership tests for every position in H.

    Zero-length H-jobs always go before the window: that never changes the
    renting period or any other completion time and can only lower their own,
    while the ratio tests degenerate for them.
    """
    if rental_rate < 0:
        raise ValueError("rental rate must be nonnegative")
    if view_wspt.alpha is None or not view_wspt.h:
        return LambdaSets(rental_rate, frozenset(), frozenset())

    acc_p, acc_w = _r_prefix_sums(view_wspt)
    r_p = acc_p[view_wspt.beta]
    r_w = acc_w[view_wspt.beta]

    x: set[int] = set()
    y: set[int] = set()
    for pos in sorted(view_wspt.h):
        pj, wj = view_wspt.p_at(pos), view_wspt.w_at(pos)
        if pj == 0:
            x.add(pos)
            continue
        before_p, before_w = acc_p[pos], acc_w[pos]
        after_p, after_w = r_p - before_p, r_w - before_w
        if wj * before_p > pj * (before_w - rental_rate) and wj * r_p >= pj * r_w:
            x.add(pos)
        elif wj * after_p < pj * (after_w + rental_rate) and wj * r_p < pj * r_w:
            y.add(pos)

    hs = sorted(view_wspt.h)
    assert set(hs[: len(x)]) == x, "X must be a prefix of H"
    assert set(hs[len(hs) - len(y):]) == y, "Y must be a suffix of H"
    return LambdaSets(rental_rate, frozenset(x), frozenset(y))


def solve_composite_twc(instance: Instance, rental_rate: Rate) -> Solution:
    """Global minimum of weighted completion time plus rate * renting period."""
    view = ordered_view(instance, "wspt")
    if view.alpha is None or view.alpha == view.beta:
        return Solution(view.order, evaluate(instance, view.order))
    sets = lambda_sets(view, rental_rate)
    seq = five_block_sequence(view, sets.x, sets.y)
    return Solution(sequence=seq, metrics=evaluate(instance, seq))


def lambda_thresholds(view_wspt: OrderedView) -> tuple[Fraction, ...]:
    """Rates at which some membership test flips, ascending and deduplicated.

    Membership is constant between consecutive thresholds (both tests are
    strict in the rate, so a job enters just above its threshold). Jobs whose
    tests do not involve the rate contribute none.
    """
    if view_wspt.alpha is None or not view_wspt.h:
        return ()
    acc_p, acc_w = _r_prefix_sums(view_wspt)
    r_p = acc_p[view_wspt.beta]
    r_w = acc_w[view_wspt.beta]

    out: set[Fraction] = set()
    for pos in sorted(view_wspt.h):
        pj, wj = view_wspt.p_at(pos), view_wspt.w_at(pos)
        if pj == 0:
            continue
        before_p, before_w = acc_p[pos], acc_w[pos]
        if wj * r_p >= pj * r_w:
            threshold = Fraction(pj * before_w - wj * before_p, pj)
            if threshold >= 0:
                out.add(threshold)
        else:
            after_p, after_w = r_p - before_p, r_w - before_w
            threshold = Fraction(wj * after_p - pj * after_w, pj)
            if threshold >= 0:
                out.add(threshold)
    return tuple(sorted(out))


def solve_composite_via_pareto(
    instance: Instance,
    objective: Objective,
    rental_rate: int,
    p_cap: int = DEFAULT_P_CAP,
) -> Solution:
    """Minimize gamma + rate * renting period over the Pareto front; every
    composite optimum is Pareto-optimal, so enumeration is exact."""
    if objective is Objective.LMAX:
        front = pareto_lmax(instance)
    elif objective is Objective.WU:
        front = pareto_wu(instance, p_cap=p_cap)
    else:
        raise ValueError(
            f"{objective} has a closed-form composite solver; use solve_composite_twc"
        )
    best = min(front.points, key=lambda pt: (pt.gamma + rental_rate * pt.er, pt.er))
    return Solution(sequence=best.sequence, metrics=evaluate(instance, best.sequence))
