import random
from fractions import Fraction

import pytest

from rentsched import (
    Instance,
    Job,
    Objective,
    enumerate_report,
    evaluate,
    five_block_sequence,
    lambda_sets,
    lambda_thresholds,
    ordered_view,
    pareto_twc,
    solve_composite_twc,
    solve_composite_via_pareto,
)

from conftest import make_fix_c, small_instance


def test_lambda_sets_fix_a(fix_a):
    view = ordered_view(fix_a, "wspt")
    s = lambda_sets(view, 1)
    assert (s.x, s.y) == (frozenset(), frozenset())
    s = lambda_sets(view, 3)
    assert (s.x, s.y) == (frozenset({3}), frozenset())
    # the before-window test is strict, so the tie value stays out
    s = lambda_sets(view, 2)
    assert s.x == frozenset()


def test_lambda_sets_all_resource():
    inst = Instance(tuple(Job(i, i, i, 0, needs_resource=True) for i in range(1, 5)))
    view = ordered_view(inst, "wspt")
    for lam in (0, 1, 17):
        s = lambda_sets(view, lam)
        assert s.x == s.y == frozenset()


def test_composite_twc_pins(fix_a):
    expectations = {1: ((1, 2, 3, 4, 5), 91), 2: (None, 98), 3: ((1, 3, 2, 4, 5), 103)}
    for lam, (seq, value) in expectations.items():
        sol = solve_composite_twc(fix_a, lam)
        assert sol.metrics.twc + lam * sol.metrics.er == value
        if seq is not None:
            assert sol.sequence == seq


def test_thresholds_fix_a(fix_a):
    view = ordered_view(fix_a, "wspt")
    assert lambda_thresholds(view) == (Fraction(2),)


def test_thresholds_structure():
    rng = random.Random(71)
    for _ in range(50):
        inst = small_instance(rng, rng.randint(2, 7))
        view = ordered_view(inst, "wspt")
        thresholds = lambda_thresholds(view)
        assert len(thresholds) <= 2 * len(view.h)
        assert list(thresholds) == sorted(set(thresholds))
        if not view.h:
            assert thresholds == ()
        # membership is constant between consecutive thresholds
        marks = [Fraction(0)] + list(thresholds)
        for lo, hi in zip(marks, marks[1:]):
            if hi == lo:
                continue
            a = lambda_sets(view, lo + Fraction(hi - lo, 3))
            b = lambda_sets(view, lo + Fraction(2 * (hi - lo), 3))
            assert (a.x, a.y) == (b.x, b.y)


def test_lambda_zero_is_wspt():
    rng = random.Random(72)
    for _ in range(50):
        inst = small_instance(rng, rng.randint(2, 7))
        sol = solve_composite_twc(inst, 0)
        assert sol.metrics.twc == evaluate(inst, ordered_view(inst, "wspt").order).twc


def test_nesting():
    rng = random.Random(73)
    for _ in range(200):
        inst = small_instance(rng, rng.randint(2, 7))
        view = ordered_view(inst, "wspt")
        if view.alpha is None:
            continue
        lam1 = rng.randint(0, 12)
        lam2 = lam1 + rng.randint(1, 12)
        s1, s2 = lambda_sets(view, lam1), lambda_sets(view, lam2)
        assert s1.x <= s2.x and s1.y <= s2.y


def test_prefix_suffix_shape():
    rng = random.Random(74)
    for _ in range(200):
        inst = small_instance(rng, rng.randint(2, 7))
        view = ordered_view(inst, "wspt")
        sets = lambda_sets(view, rng.randint(0, 20))
        h = sorted(view.h)
        assert set(h[: len(sets.x)]) == sets.x
        assert set(h[len(h) - len(sets.y):]) == sets.y


def test_composite_optimality_vs_oracle():
    rng = random.Random(75)
    for _ in range(100):
        inst = small_instance(rng, rng.randint(2, 7), w_zero_ok=True)
        report = enumerate_report(inst)
        for lam in (0, 1, 2, 3, 5, 10):
            sol = solve_composite_twc(inst, lam)
            got = sol.metrics.twc + lam * sol.metrics.er
            want_sol = report.best_composite(Objective.TWC, lam)
            assert got == want_sol.metrics.twc + lam * want_sol.metrics.er


def lower_hull_vertices(points):
    """Strict vertices of the lower-left convex hull of (er, gamma) points."""
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def test_threshold_sweep_traces_the_envelope():
    rng = random.Random(76)
    done = 0
    while done < 40:
        inst = small_instance(rng, rng.randint(3, 7))
        view = ordered_view(inst, "wspt")
        if view.alpha is None or view.alpha == view.beta or not view.h:
            continue
        front = pareto_twc(inst).value_pairs()
        vertices = lower_hull_vertices(front)
        thresholds = list(lambda_thresholds(view))
        samples = [Fraction(0)]
        for lo, hi in zip(thresholds, thresholds[1:]):
            samples.append(lo + Fraction(hi - lo, 2))
        samples.extend(thresholds)
        samples.append((thresholds[-1] if thresholds else Fraction(0)) + 1)
        seen = set()
        for lam in samples:
            sets = lambda_sets(view, lam)
            m = evaluate(inst, five_block_sequence(view, sets.x, sets.y))
            seen.add((m.er, m.twc))
        assert set(vertices) <= seen
        done += 1


def test_composite_via_pareto_pins():
    fix_c = make_fix_c()
    sol = solve_composite_via_pareto(fix_c, Objective.LMAX, 0)
    assert sol.metrics.lmax == 0  # the unconstrained EDD optimum
    big = fix_c.total_w * fix_c.total_p
    sol = solve_composite_via_pareto(fix_c, Objective.LMAX, big)
    assert sol.metrics.er == 2  # the minimum-er front point
    sol = solve_composite_via_pareto(fix_c, Objective.WU, 1)
    assert sol.metrics.wtardy + sol.metrics.er == 3  # min over {(2,1),(4,0)}


def test_composite_via_pareto_vs_oracle():
    rng = random.Random(77)
    for _ in range(25):
        inst = small_instance(rng, rng.randint(2, 5))
        report = enumerate_report(inst)
        for objective in (Objective.LMAX, Objective.WU):
            for lam in (0, 1, 3):
                sol = solve_composite_via_pareto(inst, objective, lam)
                got = sol.metrics.gamma(objective) + lam * sol.metrics.er
                want_sol = report.best_composite(objective, lam)
                want = want_sol.metrics.gamma(objective) + lam * want_sol.metrics.er
                assert got == want


def test_rejects_closed_form_objectives():
    inst = Instance((Job(1, 1, 1, 1, needs_resource=True),))
    with pytest.raises(ValueError):
        solve_composite_via_pareto(inst, Objective.TWC, 1)
