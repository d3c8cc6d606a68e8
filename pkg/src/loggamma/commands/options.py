"""Translate parsed flags into library objects."""

from __future__ import annotations

import argparse
from typing import Any

from ..errors import UsageError
from ..formatting import emit_records
from ..montecarlo import ExperimentPlan, load_plan
from ..rates import Direction, PolymerParams
from ..solvers import DEFAULT_CONFIG, SolverConfig
from ..utils import parse_int_list


def require(args: argparse.Namespace, *names: str) -> list[Any]:
    """Return the flag values, raising UsageError naming the first missing one."""
    values = []
    for name in names:
        value = getattr(args, name, None)
        if value is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for '{args.command} {_sub(args)}'")
        values.append(value)
    return values


def _sub(args: argparse.Namespace) -> str:
    return getattr(args, f"{args.command}_command", None) or ""


def params_from_args(args: argparse.Namespace, need_theta: bool = False) -> PolymerParams:
    (mu,) = require(args, "mu")
    theta = getattr(args, "theta", None)
    if need_theta and theta is None:
        require(args, "theta")
    return PolymerParams(mu, theta)


def direction_from_args(args: argparse.Namespace) -> Direction:
    s, t = require(args, "s", "t")
    return Direction(s, t)


def solver_config_from_args(args: argparse.Namespace) -> SolverConfig:
    root_tol = getattr(args, "root_tol", None)
    opt_tol = getattr(args, "opt_tol", None)
    max_iter = getattr(args, "max_iter", None)
    if root_tol is None and opt_tol is None and max_iter is None:
        return DEFAULT_CONFIG
    return SolverConfig(
        root_tol=root_tol if root_tol is not None else DEFAULT_CONFIG.root_tol,
        opt_tol=opt_tol if opt_tol is not None else DEFAULT_CONFIG.opt_tol,
        max_iter=max_iter if max_iter is not None else DEFAULT_CONFIG.max_iter,
    )


def plan_from_args(
    args: argparse.Namespace,
    estimator: str | None,
    stationary: bool | None = None,
    **defaults: Any,
) -> ExperimentPlan:
    """Plan file (if any) first, then command defaults, then explicit flags.

    With ``estimator=None`` the plan file decides which estimator runs.
    """
    plan_path = getattr(args, "plan", None)
    if plan_path:
        plan = load_plan(plan_path)
    else:
        plan = ExperimentPlan(params_from_args(args), estimator=estimator or "mean").replace(**defaults)

    mu, theta = getattr(args, "mu", None), getattr(args, "theta", None)
    params = None
    if mu is not None or theta is not None:
        params = PolymerParams(
            mu if mu is not None else plan.params.mu,
            theta if theta is not None else plan.params.theta,
        )
    s, t = getattr(args, "s", None), getattr(args, "t", None)
    direction = None
    if s is not None or t is not None:
        direction = Direction(
            s if s is not None else plan.direction.s,
            t if t is not None else plan.direction.t,
        )
    sizes = getattr(args, "sizes", None)
    if sizes is None and getattr(args, "n", None) is not None:
        sizes = str(args.n)
    seeds = getattr(args, "seeds", None)
    if stationary is None and getattr(args, "stationary", False):
        stationary = True
    return plan.replace(
        params=params,
        direction=direction,
        sizes=tuple(parse_int_list(sizes, "sizes")) if sizes is not None else None,
        replicas=getattr(args, "replicas", None),
        seed=getattr(args, "seed", None),
        seeds=tuple(parse_int_list(seeds, "seeds")) if seeds is not None else None,
        workers=getattr(args, "workers", None),
        stationary=stationary,
        estimator=estimator,
        xi=getattr(args, "xi", None),
        r=getattr(args, "r", None),
        out=getattr(args, "out", None),
    )


def emit(args: argparse.Namespace, records: list[dict]) -> None:
    emit_records(records, getattr(args, "format", "json") or "json", getattr(args, "out", None))


def emit_plan(args: argparse.Namespace, plan: ExperimentPlan, records: list[dict]) -> None:
    """Like emit, but the copy goes to ``plan.out`` (--out, else the plan file's out)."""
    emit_records(records, getattr(args, "format", "json") or "json", plan.out)
