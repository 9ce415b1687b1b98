"""Instance documents, random generation, and the two hardness-reduction
instance generators used as structured test cases.

The document is a single JSON object, UTF-8, with a fixed key order:

    {"version": 1, "jobs": [{"id": 1, "p": 2, "w": 3, "d": 4, "r": false}, ...]}

Lines starting with '#' before the JSON object are ignored by the parser, so
generators can prepend a human-readable certificate block without breaking
the round trip. An optional "spec" object (objective, mode, budget or lambda)
is accepted and exposed by parse_document; serialize never emits one.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .errors import BadSource, ParseError
from .model import (
    Composite,
    ErBudget,
    GammaBudget,
    Instance,
    Job,
    Mode,
    Objective,
    Pareto,
    ProblemSpec,
)

_JOB_KEYS = ("id", "p", "w", "d", "r")
_MODE_NAMES = ("er-budget", "gamma-budget", "pareto", "composite")


def _require_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _parse_spec(raw, where: str) -> ProblemSpec:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(raw) - {"objective", "mode", "budget", "lambda"}
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    try:
        objective = Objective(raw.get("objective"))
    except ValueError:
        raise ParseError(f"{where}: objective must be one of tc, twc, lmax, wu")
    mode_name = raw.get("mode")
    if mode_name not in _MODE_NAMES:
        raise ParseError(f"{where}: mode must be one of {', '.join(_MODE_NAMES)}")
    mode: Mode
    if mode_name == "pareto":
        mode = Pareto()
    elif mode_name == "composite":
        mode = Composite(_require_int(raw.get("lambda"), f"{where}.lambda"))
    else:
        budget = _require_int(raw.get("budget"), f"{where}.budget")
        mode = ErBudget(budget) if mode_name == "er-budget" else GammaBudget(budget)
    return ProblemSpec(objective=objective, mode=mode)


def parse_document(text: str) -> tuple[Instance, ProblemSpec | None]:
    """Parse a document; returns the instance and its optional default spec."""
    body_lines = []
    for line in text.splitlines():
        if not body_lines and line.lstrip().startswith("#"):
            continue
        body_lines.append(line)
    try:
        raw = json.loads("\n".join(body_lines))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")

    if not isinstance(raw, dict):
        raise ParseError("document root must be an object")
    unknown = set(raw) - {"version", "jobs", "spec"}
    if unknown:
        raise ParseError(f"unknown document keys {sorted(unknown)}")
    if raw.get("version") != 1:
        raise ParseError(f"unsupported document version {raw.get('version')!r}")
    jobs_raw = raw.get("jobs")
    if not isinstance(jobs_raw, list) or not jobs_raw:
        raise ParseError("'jobs' must be a nonempty list")

    jobs: list[Job] = []
    seen: set[int] = set()
    for index, rec in enumerate(jobs_raw):
        where = f"jobs[{index}]"
        if not isinstance(rec, dict):
            raise ParseError(f"{where}: expected an object")
        unknown = set(rec) - set(_JOB_KEYS)
        if unknown:
            raise ParseError(f"{where}: unknown fields {sorted(unknown)}")
        for name in ("id", "p", "w", "d"):
            if name not in rec:
                raise ParseError(f"{where}: missing field {name!r}")
        job_id = _require_int(rec["id"], f"{where}.id")
        if job_id in seen:
            raise ParseError(f"{where}: duplicate id {job_id}")
        seen.add(job_id)
        flag = rec.get("r", False)
        if not isinstance(flag, bool):
            raise ParseError(f"{where}.r: expected a boolean, got {flag!r}")
        fields = {name: _require_int(rec[name], f"{where}.{name}") for name in ("p", "w", "d")}
        try:
            jobs.append(Job(id=job_id, needs_resource=flag, **fields))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}")

    spec = _parse_spec(raw["spec"], "spec") if "spec" in raw else None
    return Instance(tuple(jobs)), spec


def parse(text: str) -> Instance:
    """Parse a document into an instance (any default spec is validated but
    dropped; use parse_document to keep it)."""
    return parse_document(text)[0]


def serialize(instance: Instance) -> str:
    """Byte-stable document: fixed key order, compact separators, newline."""
    payload = {
        "version": 1,
        "jobs": [
            {"id": job.id, "p": job.p, "w": job.w, "d": job.d, "r": job.needs_resource}
            for job in instance.jobs
        ],
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def random_instance(
    n: int,
    p_max: int,
    w_max: int,
    d_max: int | None,
    r_fraction: float,
    seed: int,
) -> Instance:
    """Seeded uniform instance: p in [0, p_max], w in [1, w_max], d in
    [0, d_max] (total processing time when d_max is None). At least one job
    needs the resource whenever r_fraction > 0."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if p_max < 1 or w_max < 1 or (d_max is not None and d_max < 1):
        raise ValueError("bounds must be at least 1")
    if not 0 <= r_fraction <= 1:
        raise ValueError("r_fraction must lie in [0, 1]")
    rng = random.Random(seed)
    ps = [rng.randint(0, p_max) for _ in range(n)]
    ws = [rng.randint(1, w_max) for _ in range(n)]
    bound = sum(ps) if d_max is None else d_max
    ds = [rng.randint(0, bound) for _ in range(n)]
    flags = [rng.random() < r_fraction for _ in range(n)]
    if r_fraction > 0 and not any(flags):
        flags[rng.randrange(n)] = True
    return Instance(
        tuple(
            Job(id=i + 1, p=ps[i], w=ws[i], d=ds[i], needs_resource=flags[i])
            for i in range(n)
        )
    )


@dataclass(frozen=True)
class ReductionCertificate:
    """Source numbers and re-derived construction constants of a reduction."""

    kind: str
    source: tuple[int, ...]
    constants: dict[str, int]
    expected_yes: bool | None

    def comment_block(self) -> str:
        lines = [f"# reduction: {self.kind}", f"# source: {','.join(map(str, self.source))}"]
        for name in sorted(self.constants):
            lines.append(f"# {name}: {self.constants[name]}")
        if self.expected_yes is not None:
            lines.append(f"# expected_yes: {str(self.expected_yes).lower()}")
        return "\n".join(lines) + "\n"


def _even_odd_expected(a: list[int], half: int) -> bool:
    sums = {0}
    for k in range(0, len(a), 2):
        sums = {s + a[k] for s in sums} | {s + a[k + 1] for s in sums}
    return half in sums


def evenodd_reduction(a: list[int]) -> tuple[Instance, int, ReductionCertificate]:
    """Instance whose renting-budgeted total-completion optimum is at most the
    returned threshold exactly when one number per consecutive pair can be
    picked to reach half the total. Small values are shifted up first so the
    construction's separation argument applies."""
    source = tuple(a)
    if len(a) < 2 or len(a) % 2 != 0:
        raise BadSource("need an even number of at least two integers")
    if any(isinstance(v, bool) or not isinstance(v, int) for v in a):
        raise BadSource("source numbers must be integers")
    if any(a[k] >= a[k + 1] for k in range(len(a) - 1)):
        raise BadSource("source numbers must be strictly increasing")
    total = sum(a)
    if total % 2 != 0:
        raise BadSource("source numbers must have an even total")

    m = len(a) // 2
    half = total // 2
    shifted = list(a)
    if half < 2 * m * (m + 1) - 2:
        shifted = [v + 2 * (m + 1) for v in a]
        half += 2 * m * (m + 1)
    big = half * half

    ps = [big + v for v in shifted]
    d_sum = sum(ps)
    assert d_sum == 2 * m * big + 2 * half
    c_sum = sum((m + 1 - k) * (ps[2 * k - 2] + ps[2 * k - 1]) for k in range(1, m + 1))
    c_sum += (m * big + half) * (m + 1)
    gate_p = 0
    final_p = c_sum + d_sum + 1
    k_r = final_p + m * big + half
    threshold = 2 * (c_sum + d_sum) + 1

    jobs = [Job(id=k + 1, p=ps[k], w=1, d=0) for k in range(2 * m)]
    jobs.append(Job(id=2 * m + 1, p=gate_p, w=1, d=0, needs_resource=True))
    jobs.append(Job(id=2 * m + 2, p=final_p, w=1, d=0, needs_resource=True))
    certificate = ReductionCertificate(
        kind="evenodd",
        source=source,
        constants={
            "B": half,
            "C": c_sum,
            "D": d_sum,
            "K_r": k_r,
            "threshold": threshold,
        },
        expected_yes=_even_odd_expected(shifted, half),
    )
    return Instance(tuple(jobs)), threshold, certificate


def _partition_expected(a: list[int], half: int) -> bool:
    sums = {0}
    for v in a:
        sums |= {s + v for s in sums}
    return half in sums


def partition_reduction(a: list[int]) -> tuple[Instance, ReductionCertificate]:
    """Instance with two unit r-jobs gating a half-sum deadline: maximum
    lateness 0 is reachable under renting budget B + 2 exactly when the
    source numbers split evenly. Partition jobs are emitted largest first so
    equal documents come from equal multisets."""
    source = tuple(a)
    if not a:
        raise BadSource("need at least one integer")
    if any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in a):
        raise BadSource("source numbers must be positive integers")
    total = sum(a)
    if total % 2 != 0:
        raise BadSource("source numbers must have an even total")
    half = total // 2

    m = len(a)
    jobs = [Job(id=1, p=1, w=1, d=half + 1, needs_resource=True)]
    for k, v in enumerate(sorted(a, reverse=True), start=2):
        jobs.append(Job(id=k, p=v, w=1, d=2 * half + 1))
    jobs.append(Job(id=m + 2, p=1, w=1, d=2 * half + 2, needs_resource=True))
    certificate = ReductionCertificate(
        kind="partition",
        source=source,
        constants={"B": half, "K_r": half + 2},
        expected_yes=_partition_expected(a, half),
    )
    return Instance(tuple(jobs)), certificate
