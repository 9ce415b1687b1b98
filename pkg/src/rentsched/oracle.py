"""Brute-force reference solver.

Enumerates every permutation of an instance (in lexicographic id order, so
ties always resolve to the lexicographically smallest witness) and answers
budget, Pareto and composite queries from the resulting table. Exists purely
as ground truth for the dynamic-programming solvers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, TooLarge
from .model import (
    Composite,
    ErBudget,
    GammaBudget,
    Instance,
    Objective,
    Pareto,
    ParetoFront,
    ParetoPoint,
    ProblemSpec,
    Sequence,
    Solution,
    evaluate,
)

DEFAULT_CAP = 8


@dataclass
class OracleReport:
    """Full (er, gamma) table over all permutations of one instance."""

    instance: Instance
    sequences: list[Sequence]
    er: np.ndarray
    gamma: dict[Objective, np.ndarray]

    def _witness(self, index: int) -> Solution:
        seq = self.sequences[index]
        return Solution(sequence=seq, metrics=evaluate(self.instance, seq))

    def best_er_budget(self, objective: Objective, budget: int) -> Solution:
        """Minimum gamma among sequences with er <= budget."""
        mask = self.er <= budget
        if not mask.any():
            raise Infeasible(f"no sequence has er <= {budget}")
        values = self.gamma[objective]
        best = values[mask].min()
        index = int(np.nonzero(mask & (values == best))[0][0])
        return self._witness(index)

    def min_er_under_gamma(self, objective: Objective, budget: int) -> Solution:
        """Minimum er among sequences with gamma <= budget."""
        values = self.gamma[objective]
        mask = values <= budget
        if not mask.any():
            raise Infeasible(f"no sequence has {objective.value} <= {budget}")
        best_er = self.er[mask].min()
        index = int(np.nonzero(mask & (self.er == best_er))[0][0])
        return self._witness(index)

    def best_composite(self, objective: Objective, rental_rate: int) -> Solution:
        total = self.gamma[objective] + rental_rate * self.er
        index = int(np.argmin(total))
        return self._witness(index)

    def front(self, objective: Objective) -> ParetoFront:
        values = self.gamma[objective]
        points: list[ParetoPoint] = []
        best_gamma: int | None = None
        for er in sorted(set(self.er.tolist())):
            mask = self.er == er
            gamma = int(values[mask].min())
            if best_gamma is not None and gamma >= best_gamma:
                continue
            index = int(np.nonzero(mask & (values == gamma))[0][0])
            points.append(ParetoPoint(er=int(er), gamma=gamma, sequence=self.sequences[index]))
            best_gamma = gamma
        return ParetoFront(objective=objective, points=tuple(points))


def enumerate_report(instance: Instance, cap: int = DEFAULT_CAP) -> OracleReport:
    """Evaluate every permutation once; reused across all queries."""
    if instance.n > cap:
        raise TooLarge(f"{instance.n} jobs exceed the oracle cap of {cap}")

    sequences: list[Sequence] = []
    er: list[int] = []
    cols: dict[Objective, list[int]] = {obj: [] for obj in Objective}
    for perm in itertools.permutations(sorted(job.id for job in instance.jobs)):
        metrics = evaluate(instance, perm)
        sequences.append(perm)
        er.append(metrics.er)
        for obj in Objective:
            cols[obj].append(metrics.gamma(obj))

    return OracleReport(
        instance=instance,
        sequences=sequences,
        er=np.asarray(er, dtype=np.int64),
        gamma={obj: np.asarray(vals, dtype=np.int64) for obj, vals in cols.items()},
    )


def brute_force(
    instance: Instance,
    spec: ProblemSpec,
    cap: int = DEFAULT_CAP,
    report: OracleReport | None = None,
) -> Solution | ParetoFront:
    """Exact optimum (or front) by exhaustive enumeration."""
    if report is None:
        report = enumerate_report(instance, cap=cap)
    mode = spec.mode
    if isinstance(mode, ErBudget):
        return report.best_er_budget(spec.objective, mode.budget)
    if isinstance(mode, GammaBudget):
        return report.min_er_under_gamma(spec.objective, mode.budget)
    if isinstance(mode, Composite):
        return report.best_composite(spec.objective, mode.rental_rate)
    if isinstance(mode, Pareto):
        return report.front(spec.objective)
    raise TypeError(f"unknown mode {mode!r}")
