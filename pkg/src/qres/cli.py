"""Command-line front end.

Examples::

    qres task2 --resource sss --j 1/2 --format json
    qres task3 --resource refbit
    qres sweep --j-max 5 --j-step 1/2 --format csv
    qres reproduce-all
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

import numpy as np

from .angular import HALF, SpinJ
from .bayes import DEFAULT_NODES
from .reproduce import reproduce_all
from .tasks import (
    Resource,
    TaskResult,
    optimize_refbit_measurement,
    task1_avg_info,
    task2_avg_info,
    task2_conclusive,
    task2_spinj_sweep,
    task3_outcome_table,
)

QUAD_NODES_ENV = "QRES_QUAD_NODES"
COMMANDS = ("task1", "task2", "task3", "sweep", "optimize-refbit", "reproduce-all")
VALID_RESOURCES = {
    "task1": "srf, sss (j=1/2)",
    "task2": "srf, sss (any j >= 1/2)",
    "task3": "srf, sss (j=1/2), refbit",
}
CSV_HEADER = ("task", "resource", "parameter", "metric", "value")


class ConfigError(ValueError):
    """Invalid command-line configuration (exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    task: str
    resource: str | None = None
    j: SpinJ | None = None
    j_min: SpinJ = HALF
    j_max: SpinJ | None = None
    j_step: SpinJ = HALF
    grid_n: int = 101
    format: str = "text"
    out: str | None = None
    seed: int = 0
    quad_nodes: int = DEFAULT_NODES

    def validate(self) -> None:
        if self.task not in COMMANDS:
            raise ConfigError(f"unknown task {self.task!r}")
        if self.j is not None and self.j.twice_j < 1:
            raise ConfigError("j must be at least 1/2")
        if self.grid_n < 11:
            raise ConfigError("grid_n must be at least 11")
        if self.j_step.twice_j < 1:
            raise ConfigError("j_step must be a positive multiple of 1/2")
        if self.quad_nodes < 1:
            raise ConfigError("quad_nodes must be positive")
        if self.format not in ("json", "csv", "text"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.task in VALID_RESOURCES:
            self._validate_resource()

    def _validate_resource(self) -> None:
        valid = VALID_RESOURCES[self.task]
        if self.resource is None:
            raise ConfigError(f"{self.task} needs --resource; valid: {valid}")
        allowed = {"task1": ("srf", "sss"), "task2": ("srf", "sss"), "task3": ("srf", "sss", "refbit")}
        if self.resource not in allowed[self.task]:
            raise ConfigError(f"resource {self.resource!r} is not valid for {self.task}; valid: {valid}")
        if self.j is not None and self.resource != "sss":
            raise ConfigError(f"--j only applies to the sss resource; valid for {self.task}: {valid}")
        if self.resource == "sss" and self.task in ("task1", "task3") and self.j not in (None, HALF):
            raise ConfigError(f"{self.task} uses a spin-1/2 singlet; valid: {valid}")


def _spin(text: str) -> SpinJ:
    try:
        return SpinJ.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_quad_nodes() -> int:
    raw = os.environ.get(QUAD_NODES_ENV)
    if raw is None:
        return DEFAULT_NODES
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{QUAD_NODES_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quad-nodes", type=int, default=None,
                        help=f"Gauss-Legendre nodes (default {DEFAULT_NODES}, or ${QUAD_NODES_ENV})")

    parser = argparse.ArgumentParser(prog="qres", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="task", required=True)
    for name, help_text in (
        ("task1", "angle between two spins: average information gain"),
        ("task2", "parallel vs anti-parallel spins: information gain and conclusive probability"),
        ("task3", "singlet vs parallel pair: conclusive probability"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--resource", choices=("srf", "sss", "refbit"), required=True)
        p.add_argument("--j", type=_spin, default=None, help='singlet spin, e.g. "1/2", "0.5" or "3"')

    p = sub.add_parser("sweep", parents=[common], help="task II information gain versus singlet spin")
    p.add_argument("--j-min", type=_spin, default=HALF)
    p.add_argument("--j-max", type=_spin, default=SpinJ(50))
    p.add_argument("--j-step", type=_spin, default=HALF)

    p = sub.add_parser("optimize-refbit", parents=[common], help="grid search over refbit measurements")
    p.add_argument("--grid-n", type=int, default=101)

    sub.add_parser("reproduce-all", parents=[common], help="check every published value")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    quad = ns.quad_nodes if ns.quad_nodes is not None else _default_quad_nodes()
    config = RunConfig(
        task=ns.task,
        resource=getattr(ns, "resource", None),
        j=getattr(ns, "j", None),
        j_min=getattr(ns, "j_min", HALF),
        j_max=getattr(ns, "j_max", None),
        j_step=getattr(ns, "j_step", HALF),
        grid_n=getattr(ns, "grid_n", 101),
        format=ns.format,
        out=ns.out,
        seed=ns.seed,
        quad_nodes=quad,
    )
    config.validate()
    return config


def _resource(config: RunConfig) -> Resource:
    if config.resource == "sss":
        return Resource.sss(config.j or HALF)
    return Resource(config.resource)


def _spin_range(config: RunConfig) -> list[SpinJ]:
    if config.j_max < config.j_min:
        raise ConfigError("j_max must not be below j_min")
    return [SpinJ(t) for t in range(config.j_min.twice_j, config.j_max.twice_j + 1, config.j_step.twice_j)]


def compute(config: RunConfig) -> list[TaskResult]:
    n = config.quad_nodes
    if config.task == "task1":
        return [task1_avg_info(_resource(config), n)]
    if config.task == "task2":
        res = _resource(config)
        out = [task2_avg_info(res, n)]
        if res.kind == "srf" or res.spin == HALF:
            out.append(task2_conclusive(res, seed=config.seed, quad_nodes=n))
        return out
    if config.task == "task3":
        return [task3_outcome_table(_resource(config), n)]
    if config.task == "sweep":
        return task2_spinj_sweep(_spin_range(config))
    if config.task == "optimize-refbit":
        opt = optimize_refbit_measurement(config.grid_n, n)
        return [TaskResult("III", Resource.refbit(), "conclusive_prob", opt.conclusive,
                           extras={"alpha": opt.alpha, "beta": opt.beta})]
    raise ConfigError(f"{config.task} does not produce task records")


# --- formatting --------------------------------------------------------------

def _num(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def _record(r: TaskResult) -> dict:
    rec = {
        "task": r.task,
        "resource": r.resource.kind,
        "parameter": r.parameter,
        "metric": r.metric,
        "value": r.value,
    }
    if r.outcome_table is not None:
        rec["outcome_table"] = {o: {h: r.outcome_table[(o, h)] for h in r.hypotheses} for o in r.outcomes}
    if r.extras:
        rec["extras"] = dict(r.extras)
    return rec


def format_json(results: Sequence[TaskResult]) -> str:
    return json.dumps([_record(r) for r in results], indent=2, ensure_ascii=False) + "\n"


def format_csv(results: Sequence[TaskResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in results:
        writer.writerow([r.task, r.resource.kind, _num(r.parameter), r.metric, _num(r.value)])
    return buf.getvalue()


def _fmt_prob(p: float) -> str:
    frac = Fraction(p).limit_denominator(96)
    exact = abs(float(frac) - p) < 1e-12
    return f"{p:.10f}" + (f" ({frac})" if exact and frac.denominator > 1 else "")


def format_text(results: Sequence[TaskResult]) -> str:
    lines = []
    for r in results:
        label = str(r.resource)
        lines.append(f"Task {r.task} | {label} | {r.metric} = {r.value:.12g}")
        if r.outcome_table:
            hyps, outs = r.hypotheses, r.outcomes
            width = max(len(h) for h in hyps) + 18
            lines.append(("  " + "outcome".ljust(10) + "".join(h.ljust(width) for h in hyps)).rstrip())
            for o in outs:
                cells = "".join(_fmt_prob(r.outcome_table[(o, h)]).ljust(width) for h in hyps)
                lines.append("  " + o.ljust(10) + cells.rstrip())
        for key, val in r.extras.items():
            lines.append(f"  {key} = {val:.12g}")
    return "\n".join(lines) + "\n"


FORMATTERS = {"json": format_json, "csv": format_csv, "text": format_text}


def _emit(text: str, config: RunConfig, stdout: TextIO) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def run(config: RunConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Execute ``config``; 0 on success, 1 on numerical failure, 2 on bad configuration.

    ``reproduce-all`` returns 1 when any anchor misses its tolerance.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        config.validate()
        if config.task == "reproduce-all":
            anchors = reproduce_all(config.quad_nodes, config.seed)
            if config.format == "json":
                text = json.dumps([a.as_dict() for a in anchors], indent=2) + "\n"
            else:
                passed = sum(a.passed for a in anchors)
                text = "\n".join([a.line() for a in anchors] +
                                 [f"{passed}/{len(anchors)} anchors passed"]) + "\n"
            _emit(text, config, stdout)
            return 0 if all(a.passed for a in anchors) else 1
        results = compute(config)
        _emit(FORMATTERS[config.format](results), config, stdout)
        return 0
    except ConfigError as exc:
        print(f"qres: error: {exc}", file=stderr)
        return 2
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"qres: numerical error: {exc}", file=stderr)
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_args(argv)
    except ConfigError as exc:
        print(f"qres: error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
