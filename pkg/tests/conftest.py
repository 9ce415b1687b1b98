from __future__ import annotations

import random

import pytest

from rentsched import Instance, Job, ordered_view, random_instance


@pytest.fixture
def fix_a() -> Instance:
    """Five jobs, strictly decreasing WSPT ratios, r-jobs at positions 2·4."""
    return make_fix_a()


@pytest.fixture
def fix_b() -> Instance:
    return make_fix_b()


@pytest.fixture
def fix_c() -> Instance:
    return make_fix_c()


def make_fix_a() -> Instance:
    return Instance(
        (
            Job(1, 1, 10, 0),
            Job(2, 2, 6, 0, needs_resource=True),
            Job(3, 2, 4, 0),
            Job(4, 3, 3, 0, needs_resource=True),
            Job(5, 4, 1, 0),
        )
    )


def make_fix_b() -> Instance:
    return Instance(
        (
            Job(1, 1, 4, 0),
            Job(2, 2, 4, 0, needs_resource=True),
            Job(3, 2, 2, 0),
            Job(4, 1, 1, 0, needs_resource=True),
        )
    )


def make_fix_c() -> Instance:
    return Instance(
        (
            Job(1, 1, 1, 3, needs_resource=True),
            Job(2, 2, 1, 5),
            Job(3, 1, 1, 5),
            Job(4, 1, 1, 5),
            Job(5, 1, 1, 6, needs_resource=True),
        )
    )


def corpus_instance(seed: int) -> Instance:
    """One member of the acceptance corpus: n in [3, 7], p in [0, 5],
    w in [1, 5], d in [0, P], resource fraction 0.4."""
    n = 3 + seed % 5
    return random_instance(n, 5, 5, None, 0.4, seed)


def small_instance(rng: random.Random, n: int, *, w_zero_ok: bool = False) -> Instance:
    """Ad-hoc random instance for module-level tests."""
    w_lo = 0 if w_zero_ok else 1
    jobs = [
        Job(i, rng.randint(0, 5), rng.randint(w_lo, 5), rng.randint(0, 12),
            rng.random() < 0.45)
        for i in range(1, n + 1)
    ]
    if not any(job.needs_resource for job in jobs):
        k = rng.randrange(n)
        jobs[k] = Job(jobs[k].id, jobs[k].p, jobs[k].w, jobs[k].d, True)
    return Instance(tuple(jobs))


def windowed_instance(rng: random.Random, n: int) -> Instance:
    """Random instance guaranteed to have two r-jobs and a nonempty H."""
    while True:
        inst = small_instance(rng, n)
        view = ordered_view(inst, "edd")
        if view.alpha is not None and view.alpha != view.beta and view.h:
            return inst
