import random

import numpy as np
import pytest

from rentsched import (
    Infeasible,
    Instance,
    Job,
    Objective,
    TooLarge,
    build_theta5,
    enumerate_report,
    evaluate,
    ordered_view,
    pareto_wu,
    solve_er_budget_wu,
    solve_wu_budget_er,
    suffix_ontime_dp,
)
from rentsched.tardy_weight import _assemble, _theta5_stages, _witness_sets

from conftest import make_fix_c, small_instance


def unit_fix_c():
    return make_fix_c()  # FIX-C already carries unit weights


def test_suffix_dp_examples():
    demo = Instance((Job(1, 1, 3, 1), Job(2, 2, 5, 2)))
    view = ordered_view(demo, "edd")
    weight, chosen = suffix_ontime_dp(view, "o", 0)[1]
    assert weight == 5 and chosen == {2}  # both together finish at 3 > 2
    weight, chosen = suffix_ontime_dp(view, "o", 99)[1]
    assert weight == 0 and chosen == frozenset()

    single = Instance((Job(1, 1, 7, 1),))
    weight, chosen = suffix_ontime_dp(ordered_view(single, "edd"), "o", 0)[1]
    assert weight == 7 and chosen == {1}


def test_theta5_branch_examples():
    # single o-job (p=2, d=2, w=5) with t = 0: X and Y' both admit it
    p = np.array([0, 2])
    w = np.array([0, 5])
    d = np.array([0, 2])
    o_only = np.array([False, False])
    _, val, ok, _ = list(_theta5_stages(p, w, d, o_only, 1, 0, 2, 2, 2))[1]
    assert ok[0, 0, 0] and val[0, 0, 0] == 0
    assert ok[2, 0, 0] and val[2, 0, 0] == 5
    assert ok[0, 2, 2] and val[0, 2, 2] == 5
    # base state: nothing else is reachable at stage 0
    _, val0, ok0, _ = list(_theta5_stages(p, w, d, o_only, 0, 0, 2, 2, 2))[0]
    assert ok0.sum() == 1 and ok0[0, 0, 0]

    # single r-job (p=2, d=2, w=5) with t = 1: the deadline branch fails
    with_r = np.array([False, True])
    _, val, ok, _ = list(_theta5_stages(p, w, d, with_r, 1, 1, 2, 2, 2))[1]
    assert not ok[0, 2, 0]
    assert ok[0, 0, 0] and val[0, 0, 0] == 0


def test_everything_on_time_when_edd_meets_due_dates():
    inst = Instance((
        Job(1, 1, 2, 1, needs_resource=True),
        Job(2, 2, 1, 3),
        Job(3, 1, 3, 4, needs_resource=True),
    ))
    assert evaluate(inst, ordered_view(inst, "edd").order).wtardy == 0
    sol = solve_er_budget_wu(inst, inst.total_p)
    assert sol.metrics.wtardy == 0


def test_fix_c_er_budget_pins():
    inst = unit_fix_c()
    report = enumerate_report(inst)
    assert solve_er_budget_wu(inst, 4).metrics.wtardy == 0
    want = report.best_er_budget(Objective.WU, 2).metrics.wtardy
    assert want > 0
    assert solve_er_budget_wu(inst, 2).metrics.wtardy == want


def test_fix_c_gamma_budget_pins():
    inst = unit_fix_c()
    assert solve_wu_budget_er(inst, 0).metrics.er == 4
    # a budget of the full weight never binds: minimal window overall
    sol = solve_wu_budget_er(inst, inst.total_w)
    assert sol.metrics.er == inst.p_of(inst.r_ids)
    with pytest.raises(Infeasible):
        solve_wu_budget_er(inst, -1)


def test_fix_c_front():
    inst = unit_fix_c()
    front = pareto_wu(inst)
    assert (4, 0) in front.value_pairs()
    assert front.value_pairs() == enumerate_report(inst).front(Objective.WU).value_pairs()


def test_single_job_front():
    r_only = Instance((Job(1, 3, 4, 0, needs_resource=True),))
    front = pareto_wu(r_only)
    assert front.value_pairs() == ((3, 4),)
    o_only = Instance((Job(1, 3, 4, 5),))
    assert pareto_wu(o_only).value_pairs() == ((0, 0),)


def test_p_cap():
    inst = Instance(tuple(Job(i, 10, 1, 5) for i in range(1, 11)))
    for solver in (solve_er_budget_wu, solve_wu_budget_er, pareto_wu):
        with pytest.raises(TooLarge):
            solver(inst, 100) if solver is not pareto_wu else solver(inst)
    # the cap is configurable
    sol = solve_er_budget_wu(inst, 100, p_cap=100)
    assert sol.metrics.wtardy >= 0


def test_structure_of_selected_sets():
    # selected jobs are on time, X and Z carry no r-jobs, and the Z-block
    # starts after every selected o-position before it
    rng = random.Random(61)
    done = 0
    while done < 40:
        inst = small_instance(rng, rng.randint(2, 6))
        if not inst.r_ids:
            continue
        view = ordered_view(inst, "edd")
        p_r = inst.p_of(inst.r_ids)
        budget = rng.randint(p_r, inst.total_p)
        tables = build_theta5(view, budget)
        value, key = _assemble(tables, budget)
        x, yp, ypp, z = _witness_sets(tables, key)
        assert not any(view.is_r(pos) for pos in x | z)
        assert all(view.is_r(pos) for pos in ypp)
        selected = x | yp | ypp | z
        if z:
            front = x | {pos for pos in yp if not view.is_r(pos)}
            assert all(pos < min(z) for pos in front)
        ids = lambda ps: {view.id_at(pos) for pos in ps}
        from rentsched import tardy_block_sequence

        seq = tardy_block_sequence(view, ids(x), ids(yp | ypp), ids(z))
        m = evaluate(inst, seq)
        assert all(m.tardy[view.id_at(pos)] == 0 for pos in selected)
        assert m.er <= budget
        # weight accounting: the tardy weight complements the selected weight
        assert m.wtardy == inst.total_w - value
        done += 1


def test_binary_search_consistency():
    rng = random.Random(62)
    for _ in range(30):
        inst = small_instance(rng, rng.randint(2, 6))
        report = enumerate_report(inst)
        for gamma in sorted(set(report.gamma[Objective.WU].tolist())):
            got = solve_wu_budget_er(inst, gamma)
            want = report.min_er_under_gamma(Objective.WU, gamma)
            assert got.metrics.er == want.metrics.er
            assert got.metrics.wtardy <= gamma


def test_oracle_equivalence_random():
    rng = random.Random(63)
    for _ in range(40):
        inst = small_instance(rng, rng.randint(2, 6))
        report = enumerate_report(inst)
        p_r = inst.p_of(inst.r_ids)
        for budget in range(p_r, inst.total_p + 1):
            got = solve_er_budget_wu(inst, budget)
            want = report.best_er_budget(Objective.WU, budget)
            assert got.metrics.wtardy == want.metrics.wtardy
            assert got.metrics.er <= budget
        assert pareto_wu(inst).value_pairs() == report.front(Objective.WU).value_pairs()


def test_no_resource_jobs_degenerate():
    inst = Instance((Job(1, 2, 3, 1), Job(2, 1, 1, 4), Job(3, 3, 2, 3)))
    sol = solve_er_budget_wu(inst, 0)
    want = enumerate_report(inst).best_er_budget(Objective.WU, 0)
    assert sol.metrics.wtardy == want.metrics.wtardy
    assert sol.metrics.er == 0
