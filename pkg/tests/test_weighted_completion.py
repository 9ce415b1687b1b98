import random

import numpy as np
import pytest

from rentsched import (
    ErBudget,
    Infeasible,
    Objective,
    build_xy_tables_theta1,
    build_xy_tables_theta2,
    enumerate_report,
    evaluate,
    five_block_sequence,
    ordered_view,
    pair_search,
    pareto_twc,
    solve_er_budget_twc,
    solve_tc_variants,
    solve_twc_budget_er,
)
from rentsched.weighted_completion import (
    MinCostWindowAtMost,
    MinCostWindowExactly,
    MinWindowCostAtMost,
    _view_arrays,
    _x_pass_fixed_rho,
)

from conftest import small_instance


def _tables(view, rho_max=None):
    if rho_max is None:
        rho_max = sum(view.p_at(pos) for pos in view.h)
    return build_xy_tables_theta1(view, rho_max)


def test_fix_b_theta1_states(fix_b):
    view = ordered_view(fix_b, "wspt")
    p, w, t, in_h = _view_arrays(view)
    stages, _, _ = _x_pass_fixed_rho(p, w, t, in_h, 2, 4, 2, keep_stages=True)
    # state after job j sits at stages[j - alpha + 1]
    val2, ok2 = stages[1]
    assert ok2[0] and val2[0] == 20
    val3, ok3 = stages[2]
    assert ok3[2] and val3[2] == 26


def test_fix_b_table_and_retrieval(fix_b):
    view = ordered_view(fix_b, "wspt")
    tables = _tables(view, 2)
    assert tables.f(4, 2) == 26
    assert tables.retrieve_x(4, 2) == {3}
    # f at rho=2 equals the weighted completion of positions 2..3 in the
    # assembled sequence
    seq = five_block_sequence(view, {3}, set())
    m = evaluate(fix_b, seq)
    assert sum(view.w_at(pos) * m.completion[view.id_at(pos)] for pos in (2, 3)) == 26


def test_rho_zero_is_view_order(fix_a):
    view = ordered_view(fix_a, "wspt")
    tables = _tables(view)
    m = evaluate(fix_a, view.order)
    for kappa in tables.kappas:
        expected = sum(
            view.w_at(pos) * m.completion[view.id_at(pos)]
            for pos in range(view.alpha, kappa)
        )
        assert tables.f(kappa, 0) == expected
        assert tables.retrieve_x(kappa, 0) == frozenset()


def test_unreachable_rho_is_infeasible(fix_a):
    view = ordered_view(fix_a, "wspt")
    tables = _tables(view)  # H = {3} with p = 2, so rho = 1 is a gap
    assert tables.f(4, 1) is None
    with pytest.raises(ValueError):
        tables.retrieve_x(4, 1)


def test_theta2_matches_theta1_on_fixtures(fix_a, fix_b):
    for inst in (fix_a, fix_b):
        view = ordered_view(inst, "wspt")
        rho_max = sum(view.p_at(pos) for pos in view.h)
        t1 = build_xy_tables_theta1(view, rho_max)
        t2 = build_xy_tables_theta2(view, rho_max)
        assert np.array_equal(t1.f_ok, t2.f_ok)
        assert np.array_equal(t1.g_ok, t2.g_ok)
        assert np.array_equal(t1.f_val[t1.f_ok], t2.f_val[t2.f_ok])
        assert np.array_equal(t1.g_val[t1.g_ok], t2.g_val[t2.g_ok])


def test_theta_agreement_random():
    rng = random.Random(21)
    for _ in range(50):
        inst = small_instance(rng, rng.randint(2, 6))
        view = ordered_view(inst, "wspt")
        if view.alpha is None:
            continue
        rho_max = sum(view.p_at(pos) for pos in view.h)
        t1 = build_xy_tables_theta1(view, rho_max)
        t2 = build_xy_tables_theta2(view, rho_max)
        assert np.array_equal(t1.f_ok, t2.f_ok)
        assert np.array_equal(t1.g_ok, t2.g_ok)
        assert np.array_equal(t1.f_val[t1.f_ok], t2.f_val[t2.f_ok])
        assert np.array_equal(t1.g_val[t1.g_ok], t2.g_val[t2.g_ok])


def test_retrieval_soundness_random():
    rng = random.Random(22)
    checked = 0
    while checked < 60:
        inst = small_instance(rng, rng.randint(3, 6))
        view = ordered_view(inst, "wspt")
        if view.alpha is None or view.alpha == view.beta:
            continue
        builder = build_xy_tables_theta1 if rng.random() < 0.5 else build_xy_tables_theta2
        tables = builder(view, sum(view.p_at(pos) for pos in view.h))
        for kappa in tables.kappas:
            for rho in range(tables.rho_max + 1):
                f = tables.f(kappa, rho)
                if f is None:
                    continue
                x = tables.retrieve_x(kappa, rho)
                assert sum(view.p_at(pos) for pos in x) == rho
                assert all(pos < kappa for pos in x)
                m = evaluate(inst, five_block_sequence(view, x, set()))
                direct = sum(
                    view.w_at(pos) * m.completion[view.id_at(pos)]
                    for pos in range(view.alpha, kappa)
                )
                assert direct == f
                g = tables.g(kappa, rho)
                if g is not None:
                    y = tables.retrieve_y(kappa, rho)
                    m = evaluate(inst, five_block_sequence(view, set(), y))
                    direct = sum(
                        view.w_at(pos) * m.completion[view.id_at(pos)]
                        for pos in range(kappa, view.beta + 1)
                    )
                    assert direct == g
                checked += 1


def test_pair_search_fix_a(fix_a):
    view = ordered_view(fix_a, "wspt")
    tables = _tables(view)
    res = pair_search(tables, view, MinCostWindowAtMost(5))
    assert (res.kappa, res.rho1, res.rho2, res.window) == (4, 2, 0, 5)
    assert tables.retrieve_x(res.kappa, res.rho1) == {3}

    res = pair_search(tables, view, MinCostWindowAtMost(12))
    assert (res.window, res.rho1, res.rho2) == (7, 0, 0)

    res = pair_search(tables, view, MinWindowCostAtMost(84))
    assert res.window == 7
    res = pair_search(tables, view, MinWindowCostAtMost(88))
    assert res.window == 5
    with pytest.raises(Infeasible):
        pair_search(tables, view, MinWindowCostAtMost(83))
    res = pair_search(tables, view, MinCostWindowExactly(5))
    assert (res.f + res.g, res.window) == (66, 5)


def test_solve_er_budget_pins(fix_a):
    sol = solve_er_budget_twc(fix_a, 5)
    assert (sol.sequence, sol.metrics.twc, sol.metrics.er) == ((1, 3, 2, 4, 5), 88, 5)
    sol = solve_er_budget_twc(fix_a, 7)
    assert sol.metrics.twc == 84
    with pytest.raises(Infeasible):
        solve_er_budget_twc(fix_a, 4)


def test_solve_gamma_budget_pins(fix_a):
    assert solve_twc_budget_er(fix_a, 84).metrics.er == 7
    assert solve_twc_budget_er(fix_a, 88).metrics.er == 5
    with pytest.raises(Infeasible):
        solve_twc_budget_er(fix_a, 83)


def test_pareto_pins_and_degenerates(fix_a):
    assert pareto_twc(fix_a).value_pairs() == ((5, 88), (7, 84))

    all_r = small_instance(random.Random(3), 5)
    all_r = type(all_r)(tuple(
        type(j)(j.id, j.p, j.w, j.d, True) for j in all_r.jobs))
    front = pareto_twc(all_r)
    assert len(front.points) == 1
    assert front.points[0].er == all_r.total_p

    one_r = small_instance(random.Random(4), 5)
    one_r = type(one_r)(tuple(
        type(j)(j.id, j.p, j.w, j.d, j.id == 1) for j in one_r.jobs))
    front = pareto_twc(one_r)
    assert len(front.points) == 1
    assert front.points[0].er == one_r.job(1).p


def test_tc_delegation(fix_a):
    rng = random.Random(31)
    report = enumerate_report(fix_a)
    sol = solve_tc_variants(fix_a, ErBudget(5))
    assert sol.metrics.tc == report.best_er_budget(Objective.TC, 5).metrics.tc
    # budget that can never bind recovers the SPT order
    inst = small_instance(rng, 5)
    sol = solve_tc_variants(inst, ErBudget(inst.total_p))
    spt = sorted(inst.jobs, key=lambda j: (j.p, j.id))
    assert evaluate(inst, [j.id for j in spt]).tc == sol.metrics.tc


def test_monotone_in_budget():
    rng = random.Random(23)
    for _ in range(20):
        inst = small_instance(rng, rng.randint(2, 6))
        p_r = inst.p_of(inst.r_ids)
        prev = None
        for budget in range(p_r, inst.total_p + 1):
            value = solve_er_budget_twc(inst, budget).metrics.twc
            if prev is not None:
                assert value <= prev
            prev = value
        wspt_twc = evaluate(inst, ordered_view(inst, "wspt").order).twc
        prev = None
        for budget in range(wspt_twc, wspt_twc + inst.total_p):
            er = solve_twc_budget_er(inst, budget).metrics.er
            if prev is not None:
                assert er <= prev
            prev = er


def test_empty_split_sets_reproduce_view_order():
    rng = random.Random(27)
    for _ in range(30):
        inst = small_instance(rng, rng.randint(2, 7))
        view = ordered_view(inst, "wspt")
        if view.alpha is None:
            continue
        assert five_block_sequence(view, set(), set()) == view.order


def test_er_budget_consistent_with_front():
    rng = random.Random(24)
    for _ in range(20):
        inst = small_instance(rng, rng.randint(2, 6))
        for point in pareto_twc(inst).points:
            sol = solve_er_budget_twc(inst, point.er)
            assert (sol.metrics.er, sol.metrics.twc) == (point.er, point.gamma)


def test_block_structure_attains_oracle_optimum():
    # every optimum is matched by some five-block sequence with max X < min Y
    rng = random.Random(25)
    done = 0
    while done < 25:
        inst = small_instance(rng, rng.randint(3, 6))
        view = ordered_view(inst, "wspt")
        if view.alpha is None or view.alpha == view.beta or not view.h:
            continue
        report = enumerate_report(inst)
        h = sorted(view.h)
        p_r = inst.p_of(inst.r_ids)
        for budget in range(p_r, inst.total_p + 1):
            best = None
            for mask_x in range(1 << len(h)):
                xs = {h[i] for i in range(len(h)) if mask_x >> i & 1}
                rest = [pos for pos in h if pos not in xs and (not xs or pos > max(xs))]
                for mask_y in range(1 << len(rest)):
                    ys = {rest[i] for i in range(len(rest)) if mask_y >> i & 1}
                    m = evaluate(inst, five_block_sequence(view, xs, ys))
                    if m.er <= budget and (best is None or m.twc < best):
                        best = m.twc
            want = report.best_er_budget(Objective.TWC, budget).metrics.twc
            assert best == want
        done += 1


def test_oracle_equivalence_random():
    rng = random.Random(26)
    for _ in range(40):
        inst = small_instance(rng, rng.randint(2, 6))
        report = enumerate_report(inst)
        p_r = inst.p_of(inst.r_ids)
        for budget in range(p_r, inst.total_p + 1):
            got = solve_er_budget_twc(inst, budget)
            want = report.best_er_budget(Objective.TWC, budget)
            assert got.metrics.twc == want.metrics.twc and got.metrics.er <= budget
        for gamma in sorted(set(report.gamma[Objective.TWC].tolist())):
            got = solve_twc_budget_er(inst, gamma)
            want = report.min_er_under_gamma(Objective.TWC, gamma)
            assert got.metrics.er == want.metrics.er and got.metrics.twc <= gamma
        assert pareto_twc(inst).value_pairs() == report.front(Objective.TWC).value_pairs()
