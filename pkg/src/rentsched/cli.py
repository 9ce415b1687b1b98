"""Command-line surface: solve, pareto, gen, verify.

All machine-readable output (instance, solution and front documents) goes to
stdout or --output; the human-readable summary goes to stderr. Exit codes:
0 success, 2 infeasible, 3 usage or parse errors (including oversized
instances), 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence as Argv

from . import composite, instances, max_lateness, oracle, tardy_weight, weighted_completion
from .errors import BadSource, Infeasible, ParseError, TooLarge
from .model import (
    Composite,
    ErBudget,
    GammaBudget,
    Instance,
    Mode,
    Objective,
    Pareto,
    ParetoFront,
    ProblemSpec,
    Solution,
)

_MODES = ("er-budget", "gamma-budget", "composite")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 3, not argparse's 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rentsched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: _Parser) -> None:
        p.add_argument("--input", required=True, help="instance document")
        p.add_argument("--output", help="write the result document here instead of stdout")
        p.add_argument("--p-cap", type=int, default=tardy_weight.DEFAULT_P_CAP,
                       help="total-processing-time cap for the tardy-weight solver")

    p_solve = sub.add_parser("solve", help="solve one budgeted or composite problem")
    add_io(p_solve)
    p_solve.add_argument("--objective", required=True, choices=[o.value for o in Objective])
    p_solve.add_argument("--mode", required=True, choices=_MODES)
    p_solve.add_argument("--budget", type=int)
    p_solve.add_argument("--lambda", dest="rental_rate", type=int)

    p_front = sub.add_parser("pareto", help="enumerate the nondominated front")
    add_io(p_front)
    p_front.add_argument("--objective", required=True, choices=[o.value for o in Objective])

    p_verify = sub.add_parser("verify", help="compare a solver against the brute-force oracle")
    add_io(p_verify)
    p_verify.add_argument("--objective", required=True, choices=[o.value for o in Objective])
    p_verify.add_argument("--mode", required=True, choices=_MODES + ("pareto",))
    p_verify.add_argument("--budget", type=int)
    p_verify.add_argument("--lambda", dest="rental_rate", type=int)
    p_verify.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP,
                          help="oracle size cap (jobs)")

    p_gen = sub.add_parser("gen", help="generate an instance document")
    p_gen.add_argument("--kind", required=True, choices=("random", "evenodd", "partition"))
    p_gen.add_argument("--output")
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--pmax", type=int, default=5)
    p_gen.add_argument("--wmax", type=int, default=5)
    p_gen.add_argument("--dmax", type=int)
    p_gen.add_argument("--rfrac", type=float, default=0.4)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--numbers", help="comma-separated source numbers for reductions")
    return parser


def _mode_from_args(args: argparse.Namespace) -> Mode:
    if args.mode == "composite":
        if args.rental_rate is None or args.budget is not None:
            raise _UsageError("composite mode takes --lambda and no --budget")
        if args.rental_rate < 0:
            raise _UsageError("--lambda must be nonnegative")
        return Composite(args.rental_rate)
    if args.mode == "pareto":
        if args.budget is not None or args.rental_rate is not None:
            raise _UsageError("pareto mode takes neither --budget nor --lambda")
        return Pareto()
    if args.budget is None or args.rental_rate is not None:
        raise _UsageError(f"{args.mode} mode takes --budget and no --lambda")
    return ErBudget(args.budget) if args.mode == "er-budget" else GammaBudget(args.budget)


def _read_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as handle:
            return instances.parse(handle.read())
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}")


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _dispatch(instance: Instance, spec: ProblemSpec, p_cap: int) -> Solution | ParetoFront:
    objective, mode = spec.objective, spec.mode
    if objective is Objective.TC:
        return weighted_completion.solve_tc_variants(instance, mode)
    if objective is Objective.TWC:
        if isinstance(mode, ErBudget):
            return weighted_completion.solve_er_budget_twc(instance, mode.budget)
        if isinstance(mode, GammaBudget):
            return weighted_completion.solve_twc_budget_er(instance, mode.budget)
        if isinstance(mode, Composite):
            return composite.solve_composite_twc(instance, mode.rental_rate)
        return weighted_completion.pareto_twc(instance)
    if objective is Objective.LMAX:
        if isinstance(mode, ErBudget):
            return max_lateness.solve_er_budget_lmax(instance, mode.budget)
        if isinstance(mode, GammaBudget):
            return max_lateness.solve_lmax_budget_er(instance, mode.budget)
        if isinstance(mode, Composite):
            return composite.solve_composite_via_pareto(
                instance, objective, mode.rental_rate, p_cap=p_cap
            )
        return max_lateness.pareto_lmax(instance)
    if isinstance(mode, ErBudget):
        return tardy_weight.solve_er_budget_wu(instance, mode.budget, p_cap=p_cap)
    if isinstance(mode, GammaBudget):
        return tardy_weight.solve_wu_budget_er(instance, mode.budget, p_cap=p_cap)
    if isinstance(mode, Composite):
        return composite.solve_composite_via_pareto(
            instance, objective, mode.rental_rate, p_cap=p_cap
        )
    return tardy_weight.pareto_wu(instance, p_cap=p_cap)


def _objective_value(solution: Solution, spec: ProblemSpec) -> int:
    gamma = solution.metrics.gamma(spec.objective)
    if isinstance(spec.mode, GammaBudget):
        return solution.metrics.er
    if isinstance(spec.mode, Composite):
        return gamma + spec.mode.rental_rate * solution.metrics.er
    return gamma


def solution_document(solution: Solution, objective_value: int) -> str:
    metrics = solution.metrics
    payload = {
        "sequence": list(solution.sequence),
        "feasible": solution.feasible,
        "objective": objective_value,
        "er": metrics.er,
        "metrics": {
            "tc": metrics.tc,
            "twc": metrics.twc,
            "lmax": metrics.lmax,
            "wtardy": metrics.wtardy,
        },
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def front_document(front: ParetoFront) -> str:
    payload = {
        "points": [
            {"er": pt.er, "gamma": pt.gamma, "sequence": list(pt.sequence)}
            for pt in front.points
        ]
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def _infeasible_document(reason: str) -> str:
    return json.dumps({"feasible": False, "reason": reason}, separators=(",", ":")) + "\n"


def _run_solve(args: argparse.Namespace) -> int:
    spec = ProblemSpec(Objective(args.objective), _mode_from_args(args))
    instance = _read_instance(args.input)
    try:
        result = _dispatch(instance, spec, args.p_cap)
    except Infeasible as exc:
        _emit(_infeasible_document(str(exc)), args.output)
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    value = _objective_value(result, spec)
    _emit(solution_document(result, value), args.output)
    print(
        f"{spec.objective.value} {args.mode}: objective={value} er={result.metrics.er}",
        file=sys.stderr,
    )
    return 0


def _run_pareto(args: argparse.Namespace) -> int:
    instance = _read_instance(args.input)
    spec = ProblemSpec(Objective(args.objective), Pareto())
    front = _dispatch(instance, spec, args.p_cap)
    _emit(front_document(front), args.output)
    print(
        f"{spec.objective.value} front: {len(front.points)} point(s)",
        file=sys.stderr,
    )
    return 0


def _run_verify(args: argparse.Namespace) -> int:
    spec = ProblemSpec(Objective(args.objective), _mode_from_args(args))
    instance = _read_instance(args.input)
    report = oracle.enumerate_report(instance, cap=args.cap)

    try:
        got = _dispatch(instance, spec, args.p_cap)
        solver_failed = False
    except Infeasible:
        solver_failed = True
    try:
        want = oracle.brute_force(instance, spec, report=report)
        oracle_failed = False
    except Infeasible:
        oracle_failed = True

    if solver_failed or oracle_failed:
        agree = solver_failed == oracle_failed
        print(
            f"solver: {'infeasible' if solver_failed else 'feasible'}, "
            f"oracle: {'infeasible' if oracle_failed else 'feasible'}",
            file=sys.stderr,
        )
        return 0 if agree else 4

    if isinstance(spec.mode, Pareto):
        got_pairs, want_pairs = got.value_pairs(), want.value_pairs()
        print(f"solver front: {got_pairs}\noracle front: {want_pairs}", file=sys.stderr)
        return 0 if got_pairs == want_pairs else 4
    got_value = _objective_value(got, spec)
    want_value = _objective_value(want, spec)
    print(f"solver: {got_value}, oracle: {want_value}", file=sys.stderr)
    return 0 if got_value == want_value else 4


def _parse_numbers(raw: str | None) -> list[int]:
    if not raw:
        raise _UsageError("reduction kinds need --numbers")
    try:
        return [int(part) for part in raw.split(",")]
    except ValueError:
        raise _UsageError(f"--numbers must be comma-separated integers, got {raw!r}")


def _run_gen(args: argparse.Namespace) -> int:
    if args.kind == "random":
        if args.n is None:
            raise _UsageError("random kind needs --n")
        instance = instances.random_instance(
            args.n, args.pmax, args.wmax, args.dmax, args.rfrac, args.seed
        )
        _emit(instances.serialize(instance), args.output)
        return 0
    numbers = _parse_numbers(args.numbers)
    if args.kind == "evenodd":
        instance, _, certificate = instances.evenodd_reduction(numbers)
    else:
        instance, certificate = instances.partition_reduction(numbers)
    _emit(certificate.comment_block() + instances.serialize(instance), args.output)
    return 0


def main(argv: Argv[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _run_solve(args)
        if args.command == "pareto":
            return _run_pareto(args)
        if args.command == "verify":
            return _run_verify(args)
        return _run_gen(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, BadSource, TooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
