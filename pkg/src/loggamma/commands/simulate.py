"""Simulate command handlers: sampled environments and exact log-partition functions."""

from __future__ import annotations

import argparse

import numpy as np

from ..errors import UsageError
from ..lattice import (
    DPathSpec,
    Variant,
    build_env,
    dp_corner,
    dp_logZ,
    dp_logZ_ddim,
    logZ_line,
    make_stream,
    sample_log_gamma,
    sample_quenched_path,
    zero_env,
)
from ..montecarlo import run_plan, run_replicas
from ..utils import parse_int_list
from .options import emit, emit_plan, params_from_args, plan_from_args, require

# Steps of a path in the output strings: E = +e1 (i grows), N = +e2 (j grows)
STEP_EAST = "E"
STEP_NORTH = "N"


def _variant(args: argparse.Namespace) -> Variant:
    return Variant(params_from_args(args, need_theta=args.stationary), args.stationary)


def handle_simulate_logz(args: argparse.Namespace) -> int:
    """log Z at (floor(ns), floor(nt)), one record per replica."""
    require(args, "n")
    plan = plan_from_args(args, "mean")
    size = plan.sizes[0]
    m, n = plan.endpoint(size)
    variant = plan.variant

    def one(replica: int) -> dict:
        env = build_env(m, n, variant, plan.seed, stream_id=size, replica=replica)
        return {
            "replica": replica,
            "seed": plan.seed,
            "m": m,
            "n": n,
            "variant": variant.label,
            "logZ": dp_corner(env, square=args.square),
        }

    emit(args, run_replicas(one, plan.replicas, plan.workers))
    return 0


def handle_simulate_logz_line(args: argparse.Namespace) -> int:
    """Point-to-line log Z over |u|_1 = n."""
    (level,) = require(args, "n")
    variant = _variant(args)

    def one(replica: int) -> dict:
        env = build_env(level, level, variant, args.seed, stream_id=level, replica=replica)
        return {"replica": replica, "seed": args.seed, "level": level, "variant": variant.label,
                "logZ": logZ_line(env, level)}

    emit(args, run_replicas(one, args.replicas, args.workers))
    return 0


def handle_simulate_logz_ddim(args: argparse.Namespace) -> int:
    """log Z to the endpoint --u in dimension --d."""
    d, u = require(args, "d", "u")
    spec = DPathSpec(d, tuple(parse_int_list(u, "u")))
    if args.zero_weights:
        records = [{"replica": 0, "d": d, "u": list(spec.endpoint),
                    "logZ": dp_logZ_ddim(spec, np.zeros(spec.shape))}]
        emit(args, records)
        return 0
    params = params_from_args(args)

    def one(replica: int) -> dict:
        rng = make_stream(args.seed, stream_id=d, replica=replica)
        logw = -sample_log_gamma(params.mu, spec.points, rng).reshape(spec.shape)
        return {"replica": replica, "seed": args.seed, "d": d, "u": list(spec.endpoint),
                "logZ": dp_logZ_ddim(spec, logw)}

    emit(args, run_replicas(one, args.replicas, args.workers))
    return 0


def path_steps(path: list[tuple[int, int]]) -> str:
    """Encode a lattice path as a string of E/N steps."""
    return "".join(STEP_EAST if b[0] > a[0] else STEP_NORTH for a, b in zip(path, path[1:]))


def handle_simulate_path(args: argparse.Namespace) -> int:
    """Quenched polymer paths in one sampled environment."""
    (size,) = require(args, "n")
    m = args.m if args.m is not None else size
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    variant = _variant(args)
    env = build_env(m, size, variant, args.seed) if not args.zero_weights else zero_env(m, size, variant)
    field = dp_logZ(env)
    rng = make_stream(args.seed, stream_id=1, replica=0)
    records = []
    for sample in range(args.count):
        records.append({"sample": sample, "seed": args.seed, "m": m, "n": size,
                        "steps": path_steps(sample_quenched_path(field, rng))})
    emit(args, records)
    return 0


def handle_simulate_env_dump(args: argparse.Namespace) -> int:
    """Write the sampled grid as rows (i, j, logw)."""
    (size,) = require(args, "n")
    m = args.m if args.m is not None else size
    env = build_env(m, size, _variant(args), args.seed)
    emit(args, [{"i": i, "j": j, "logw": value} for i, j, value in env.cells()])
    return 0


def handle_simulate_lmgf(args: argparse.Namespace) -> int:
    """Replica estimate of n^{-1} log E exp(xi log Z) per size, next to its limit."""
    plan = plan_from_args(args, "lmgf")
    if plan.xi is None:
        require(args, "xi")
    emit_plan(args, plan, run_plan(plan))
    return 0


def handle_simulate_right_tail(args: argparse.Namespace) -> int:
    """Empirical right-tail rate at level r per size, next to rate_J."""
    plan = plan_from_args(args, "tail")
    if plan.r is None:
        require(args, "r")
    emit_plan(args, plan, run_plan(plan))
    return 0


def handle_simulate_plan(args: argparse.Namespace) -> int:
    """Run whichever estimator the plan file names."""
    require(args, "plan")
    plan = plan_from_args(args, None)
    emit_plan(args, plan, run_plan(plan))
    return 0
