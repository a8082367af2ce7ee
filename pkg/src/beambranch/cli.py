"""Command-line entry point: check | eigen | branch | solve.

Exit codes: 0 success, 1 usage/config/IO error, 2 hypotheses fail (check),
3 solve failure (branch/solve). CSV numbers carry 17 significant digits so
files round-trip losslessly; identical configs produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import continuation, nonlocal_term, operators, spectra
from .errors import (
    BeamBranchError,
    MalformedConfig,
    NewtonDiverged,
    NoBracket,
    PositivityLost,
)
from .problem import build_problem, load_config

BRANCH_HEADER = "step,lambda,sup_norm,min_value,residual_norm,arclength"
EIGEN_HEADER = "k,lambda_k,nodal_count,residual"
SOLUTION_HEADER = "x,u"


@dataclass
class RunConfig:
    command: str
    config_path: str
    n: int | None = None
    ds: float = 0.02
    max_steps: int = 500
    lambda_max: float = 2.0
    lambda_target: float = 1.0
    modes: int = 1
    epsilon: float = 1e-2
    newton_tol: float = 1e-10
    out: str | None = None
    fmt: str = "csv"


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _setup(cfg: RunConfig):
    config = load_config(cfg.config_path)
    spec = build_problem(config, n=cfg.n)
    fact = operators.assemble_operator(spec)
    ev = nonlocal_term.NonlocalEvaluator.from_spec(spec)
    return spec, fact, ev


def run_check(cfg: RunConfig) -> int:
    config = load_config(cfg.config_path)
    spec = build_problem(config, n=cfg.n)
    report = spectra.check_hypotheses(spec)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", cfg.out)
    return 0 if report.theorem_applies else 2


def run_eigen(cfg: RunConfig) -> int:
    if cfg.modes > 5:
        raise MalformedConfig(f"at most 5 modes are supported, got {cfg.modes}")
    spec, fact, ev = _setup(cfg)
    pairs = []
    if cfg.modes >= 1:
        principal = spectra.principal_eigenpair(fact, spec.a.samples)
        pairs = [principal] + spectra.higher_eigenpairs(
            fact, spec.a.samples, cfg.modes - 1, principal
        )
    rows = [(p.index, p.lam, p.nodal_count, p.residual) for p in pairs]
    if cfg.fmt == "json":
        payload = [
            {"k": k, "lambda_k": lam, "nodal_count": nc, "residual": res}
            for k, lam, nc, res in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    else:
        lines = [EIGEN_HEADER] + [
            f"{k},{_fmt(lam)},{nc},{_fmt(res)}" for k, lam, nc, res in rows
        ]
        _emit("\n".join(lines) + "\n", cfg.out)
    return 0


def _branch_rows(branch: continuation.Branch):
    for step, pt in enumerate(branch.points):
        yield (step, pt.lam, pt.sup_norm, pt.min_value, pt.residual_norm, pt.arclength)


def run_branch(cfg: RunConfig) -> int:
    spec, fact, ev = _setup(cfg)
    eigenpair = spectra.principal_eigenpair(fact, spec.a.samples)
    branch = continuation.trace_branch(
        spec, fact, ev, eigenpair,
        ds=cfg.ds, max_steps=cfg.max_steps, lambda_max=cfg.lambda_max,
        newton_tol=cfg.newton_tol, epsilon=cfg.epsilon,
    )
    if cfg.fmt == "json":
        payload = {
            "start_lambda": branch.start_lambda,
            "status": branch.status,
            "points": [
                {"step": s, "lambda": lam, "sup_norm": sup, "min_value": mn,
                 "residual_norm": res, "arclength": arc}
                for s, lam, sup, mn, res, arc in _branch_rows(branch)
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    else:
        lines = [BRANCH_HEADER]
        for s, lam, sup, mn, res, arc in _branch_rows(branch):
            lines.append(f"{s},{_fmt(lam)},{_fmt(sup)},{_fmt(mn)},{_fmt(res)},{_fmt(arc)}")
        lines.append(f"# status = {branch.status}")
        _emit("\n".join(lines) + "\n", cfg.out)
    failed = branch.status in (continuation.STATUS_NEWTON, continuation.STATUS_POSITIVITY)
    return 3 if failed else 0


def run_solve(cfg: RunConfig) -> int:
    spec, fact, ev = _setup(cfg)
    eigenpair = spectra.principal_eigenpair(fact, spec.a.samples)
    lambda_max = max(cfg.lambda_max, cfg.lambda_target)
    branch = continuation.trace_branch(
        spec, fact, ev, eigenpair,
        ds=cfg.ds, max_steps=cfg.max_steps, lambda_max=lambda_max,
        newton_tol=cfg.newton_tol, epsilon=cfg.epsilon,
    )
    point = continuation.solve_at_lambda(
        spec, fact, ev, cfg.lambda_target,
        branch=branch, tol=cfg.newton_tol, epsilon=cfg.epsilon,
    )
    x = np.concatenate([[0.0], spec.grid.nodes, [1.0]])
    u = np.concatenate([[0.0], np.asarray(point.u), [0.0]])
    certificate = {
        "lambda": point.lam,
        "sup_norm": point.sup_norm,
        "min_value": point.min_value,
        "residual_norm": point.residual_norm,
    }
    if cfg.fmt == "json":
        payload = dict(certificate)
        payload["x"] = list(x)
        payload["u"] = list(u)
        _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    else:
        lines = [SOLUTION_HEADER] + [f"{_fmt(xi)},{_fmt(ui)}" for xi, ui in zip(x, u)]
        body = "\n".join(lines) + "\n"
        sidecar = json.dumps(certificate, indent=2) + "\n"
        if cfg.out is None:
            sys.stdout.write(body)
            sys.stdout.write(sidecar)
        else:
            Path(cfg.out).write_text(body)
            Path(cfg.out).with_suffix(".json").write_text(sidecar)
    return 0


_RUNNERS = {"check": run_check, "eigen": run_eigen, "branch": run_branch, "solve": run_solve}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beambranch",
        description="Hypothesis checks, eigenpairs, and positive-solution "
                    "branch tracing for nonlocal fourth-order hinged problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "check": "verify the existence hypotheses and report the principal eigenvalue",
        "eigen": "compute leading eigenpairs of the weighted linear problem",
        "branch": "trace the positive solution branch from the bifurcation point",
        "solve": "solve at a fixed parameter value (default lambda = 1)",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="problem config file")
        p.add_argument("--n", type=int, default=None, help="override grid size")
        p.add_argument("--ds", type=float, default=0.02, help="initial arclength step")
        p.add_argument("--max-steps", type=int, default=500, dest="max_steps")
        p.add_argument("--lambda-max", type=float, default=2.0, dest="lambda_max")
        p.add_argument("--lambda", type=float, default=1.0, dest="lambda_target",
                       help="target parameter for solve")
        p.add_argument("--modes", type=int, default=1, help="eigenpairs to compute")
        p.add_argument("--epsilon", type=float, default=1e-2, help="start amplitude")
        p.add_argument("--newton-tol", type=float, default=1e-10, dest="newton_tol")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    return parser


def _positive(name: str, value: float) -> None:
    if value <= 0:
        raise MalformedConfig(f"--{name} must be positive, got {value}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        config_path=args.config,
        n=args.n,
        ds=args.ds,
        max_steps=args.max_steps,
        lambda_max=args.lambda_max,
        lambda_target=args.lambda_target,
        modes=args.modes,
        epsilon=args.epsilon,
        newton_tol=args.newton_tol,
        out=args.out,
        fmt=args.fmt,
    )
    try:
        _positive("ds", cfg.ds)
        _positive("lambda-max", cfg.lambda_max)
        _positive("epsilon", cfg.epsilon)
        _positive("newton-tol", cfg.newton_tol)
        if cfg.max_steps < 0 or cfg.modes < 0:
            raise MalformedConfig("--max-steps and --modes must be nonnegative")
        return _RUNNERS[cfg.command](cfg)
    except (NewtonDiverged, NoBracket, PositivityLost) as exc:
        print(f"beambranch {cfg.command}: {exc}", file=sys.stderr)
        return 3
    except (BeamBranchError, OSError, ValueError) as exc:
        print(f"beambranch {cfg.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
