"""Domain model: jobs, instances, sorted views, schedule evaluation, and the
block-sequence constructors shared by every solver.

Positions in an OrderedView are 1-based, matching the convention that the
prefix-sum t[k] is the total processing time of positions 1..k-1. All ratio
comparisons (WSPT) are done with exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Literal

from .errors import InvalidBlockSets, NotAPermutation

OrderRule = Literal["wspt", "edd"]

#: A schedule is a permutation of job ids, processed back to back from time 0.
Sequence = tuple[int, ...]


@dataclass(frozen=True)
class Job:
    """One job: integer processing time, weight, due date, resource flag."""

    id: int
    p: int
    w: int
    d: int
    needs_resource: bool = False

    def __post_init__(self) -> None:
        for name in ("id", "p", "w", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"job field {name!r} must be an int, got {value!r}")
        if self.id < 1:
            raise ValueError(f"job id must be a positive integer, got {self.id}")
        if self.p < 0 or self.w < 0 or self.d < 0:
            raise ValueError(f"job {self.id}: p, w and d must be nonnegative")


@dataclass(frozen=True)
class Instance:
    """An immutable set of jobs with unique ids."""

    jobs: tuple[Job, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if not self.jobs:
            raise ValueError("an instance needs at least one job")
        ids = [job.id for job in self.jobs]
        if len(set(ids)) != len(ids):
            raise ValueError("job ids must be unique within an instance")

    def __iter__(self) -> Iterator[Job]:
        return iter(self.jobs)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def total_p(self) -> int:
        return sum(job.p for job in self.jobs)

    @property
    def total_w(self) -> int:
        return sum(job.w for job in self.jobs)

    @property
    def r_ids(self) -> frozenset[int]:
        return frozenset(job.id for job in self.jobs if job.needs_resource)

    @property
    def o_ids(self) -> frozenset[int]:
        return frozenset(job.id for job in self.jobs if not job.needs_resource)

    @cached_property
    def _by_id(self) -> dict[int, Job]:
        return {job.id: job for job in self.jobs}

    def job(self, job_id: int) -> Job:
        return self._by_id[job_id]

    def p_of(self, ids: Iterable[int]) -> int:
        return sum(self._by_id[i].p for i in ids)

    def w_of(self, ids: Iterable[int]) -> int:
        return sum(self._by_id[i].w for i in ids)


class Objective(str, Enum):
    """Scheduling cost minimized alongside or against the renting period."""

    TC = "tc"
    TWC = "twc"
    LMAX = "lmax"
    WU = "wu"


@dataclass(frozen=True)
class ErBudget:
    """Renting period capped; scheduling cost minimized."""

    budget: int


@dataclass(frozen=True)
class GammaBudget:
    """Scheduling cost capped; renting period minimized."""

    budget: int


@dataclass(frozen=True)
class Pareto:
    """Both criteria minimized; the whole nondominated front is returned."""


@dataclass(frozen=True)
class Composite:
    """Scheduling cost plus rental_rate times the renting period, minimized."""

    rental_rate: int

    def __post_init__(self) -> None:
        if self.rental_rate < 0:
            raise ValueError("rental rate must be nonnegative")


Mode = ErBudget | GammaBudget | Pareto | Composite


@dataclass(frozen=True)
class ProblemSpec:
    objective: Objective
    mode: Mode


@dataclass(frozen=True, eq=False)
class ScheduleMetrics:
    """Everything evaluate() derives from a sequence; all integers."""

    completion: dict[int, int]
    lateness: dict[int, int]
    tardy: dict[int, int]
    er: int
    tc: int
    twc: int
    lmax: int
    wtardy: int

    def gamma(self, objective: Objective) -> int:
        return {
            Objective.TC: self.tc,
            Objective.TWC: self.twc,
            Objective.LMAX: self.lmax,
            Objective.WU: self.wtardy,
        }[objective]


@dataclass(frozen=True, eq=False)
class Solution:
    sequence: Sequence
    metrics: ScheduleMetrics
    feasible: bool = True


@dataclass(frozen=True)
class ParetoPoint:
    er: int
    gamma: int
    sequence: Sequence


@dataclass(frozen=True)
class ParetoFront:
    """Nondominated (er, gamma) points, er strictly increasing."""

    objective: Objective
    points: tuple[ParetoPoint, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        ers = [pt.er for pt in self.points]
        gammas = [pt.gamma for pt in self.points]
        if ers != sorted(set(ers)) or gammas != sorted(set(gammas), reverse=True):
            raise ValueError("front must be strictly monotone in both criteria")

    def value_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((pt.er, pt.gamma) for pt in self.points)


def evaluate(instance: Instance, sequence: Iterable[int]) -> ScheduleMetrics:
    """Compute completion times, lateness, tardiness, renting period and the
    four objective values for a permutation of the instance's jobs."""
    seq = tuple(sequence)
    if sorted(seq) != sorted(job.id for job in instance.jobs):
        raise NotAPermutation("sequence is not a permutation of the instance's job ids")

    completion: dict[int, int] = {}
    clock = 0
    for job_id in seq:
        clock += instance.job(job_id).p
        completion[job_id] = clock

    lateness = {job.id: completion[job.id] - job.d for job in instance.jobs}
    tardy = {job.id: int(lateness[job.id] > 0) for job in instance.jobs}

    r_ids = instance.r_ids
    if r_ids:
        er = max(completion[i] for i in r_ids) - min(
            completion[i] - instance.job(i).p for i in r_ids
        )
    else:
        er = 0

    return ScheduleMetrics(
        completion=completion,
        lateness=lateness,
        tardy=tardy,
        er=er,
        tc=sum(completion.values()),
        twc=sum(job.w * completion[job.id] for job in instance.jobs),
        lmax=max(lateness.values()),
        wtardy=sum(job.w * tardy[job.id] for job in instance.jobs),
    )


@dataclass(frozen=True)
class OrderedView:
    """An instance re-indexed by WSPT or EDD.

    ``order[k-1]`` is the job id at position k; ``t[k]`` is the total
    processing time of positions 1..k-1 (valid for k in 1..n+1, ``t[0]`` is a
    placeholder). ``alpha``/``beta`` mark the first/last r-job position and
    ``h`` the o-job positions strictly between them; all three are absent when
    the instance has no r-jobs.
    """

    instance: Instance
    rule: OrderRule
    order: tuple[int, ...]
    t: tuple[int, ...]
    alpha: int | None
    beta: int | None
    h: frozenset[int]

    @property
    def n(self) -> int:
        return len(self.order)

    @cached_property
    def _pos_by_id(self) -> dict[int, int]:
        return {job_id: pos for pos, job_id in enumerate(self.order, start=1)}

    def id_at(self, pos: int) -> int:
        return self.order[pos - 1]

    def job_at(self, pos: int) -> Job:
        return self.instance.job(self.order[pos - 1])

    def pos_of(self, job_id: int) -> int:
        return self._pos_by_id[job_id]

    def p_at(self, pos: int) -> int:
        return self.job_at(pos).p

    def w_at(self, pos: int) -> int:
        return self.job_at(pos).w

    def d_at(self, pos: int) -> int:
        return self.job_at(pos).d

    def is_r(self, pos: int) -> bool:
        return self.job_at(pos).needs_resource

    def p_range(self, lo: int, hi: int) -> int:
        """Total processing time of positions lo..hi (inclusive)."""
        if hi < lo:
            return 0
        return self.t[hi + 1] - self.t[lo]

    def window_p(self) -> int:
        """p(J[alpha, beta]); 0 when there are no r-jobs."""
        if self.alpha is None or self.beta is None:
            return 0
        return self.p_range(self.alpha, self.beta)


def _wspt_key(job: Job) -> tuple:
    # p == 0 sorts first (infinite ratio); otherwise nonincreasing w/p, exact.
    if job.p == 0:
        return (0, 0, job.id)
    return (1, -Fraction(job.w, job.p), job.id)


def ordered_view(instance: Instance, rule: OrderRule) -> OrderedView:
    """Sort the instance by WSPT or EDD (ties by ascending id) and derive the
    prefix sums and window markers used by the dynamic programs."""
    if rule == "wspt":
        jobs = sorted(instance.jobs, key=_wspt_key)
    elif rule == "edd":
        jobs = sorted(instance.jobs, key=lambda job: (job.d, job.id))
    else:
        raise ValueError(f"unknown order rule {rule!r}")

    order = tuple(job.id for job in jobs)
    t = [0, 0]
    for job in jobs:
        t.append(t[-1] + job.p)

    r_positions = [pos for pos, job in enumerate(jobs, start=1) if job.needs_resource]
    if r_positions:
        alpha, beta = r_positions[0], r_positions[-1]
        h = frozenset(
            pos
            for pos in range(alpha, beta + 1)
            if not jobs[pos - 1].needs_resource
        )
    else:
        alpha = beta = None
        h = frozenset()

    return OrderedView(
        instance=instance,
        rule=rule,
        order=order,
        t=tuple(t),
        alpha=alpha,
        beta=beta,
        h=h,
    )


def five_block_sequence(
    view: OrderedView, x: Iterable[int], y: Iterable[int]
) -> Sequence:
    """Build the block sequence: prefix, X, window remainder, Y, suffix, with
    every block internally in view order. X and Y are position sets in H."""
    xs = frozenset(x)
    ys = frozenset(y)
    if view.alpha is None or view.beta is None:
        raise InvalidBlockSets("view has no r-jobs, so there is no window to split")
    if not xs <= view.h or not ys <= view.h:
        raise InvalidBlockSets("X and Y must be o-job positions inside [alpha, beta]")
    if xs & ys:
        raise InvalidBlockSets("X and Y overlap")

    a, b = view.alpha, view.beta
    middle = [pos for pos in range(a, b + 1) if pos not in xs and pos not in ys]
    positions = (
        list(range(1, a))
        + sorted(xs)
        + middle
        + sorted(ys)
        + list(range(b + 1, view.n + 1))
    )
    return tuple(view.id_at(pos) for pos in positions)


def tardy_block_sequence(
    view_edd: OrderedView,
    x: Iterable[int],
    y: Iterable[int],
    z: Iterable[int],
) -> Sequence:
    """Build the tardy-weight block sequence X, Y, J^r \\ Y, Z, rest from job
    id sets, every block internally in EDD order."""
    xs, ys, zs = frozenset(x), frozenset(y), frozenset(z)
    if (xs & ys) or (xs & zs) or (ys & zs):
        raise InvalidBlockSets("X, Y and Z must be pairwise disjoint")
    known = {job.id for job in view_edd.instance.jobs}
    if not (xs | ys | zs) <= known:
        raise InvalidBlockSets("block sets refer to unknown job ids")
    r_ids = view_edd.instance.r_ids
    if (xs | zs) & r_ids:
        raise InvalidBlockSets("X and Z may not contain r-jobs")

    def by_edd(ids: Iterable[int]) -> list[int]:
        return sorted(ids, key=view_edd.pos_of)

    rest = known - xs - ys - zs - r_ids
    blocks = [
        by_edd(xs),
        by_edd(ys),
        by_edd(r_ids - ys),
        by_edd(zs),
        by_edd(rest),
    ]
    return tuple(job_id for block in blocks for job_id in block)
