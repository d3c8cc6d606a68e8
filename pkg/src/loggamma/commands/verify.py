"""Verify command handlers: identity checks and Monte Carlo acceptance tests."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .. import montecarlo, rates
from ..constants import EXIT_OK, EXIT_TEST_FAILED
from ..formatting import Color, is_pretty_output, render_table, short_number, summary_rows
from ..montecarlo import ExperimentPlan, TestReport
from ..rates import Direction, PolymerParams
from ..solvers import DEFAULT_CONFIG, SolverConfig
from ..specfun import digamma
from .options import direction_from_args, emit, emit_plan, params_from_args, plan_from_args, solver_config_from_args


def _passfail(report: TestReport) -> str:
    return "pass" if report.passed else "FAIL"


def print_summary(report: TestReport, show_rows: bool = True) -> None:
    """Human summary on stderr: headline table, then the per-row table."""
    stream = sys.stderr
    pretty = is_pretty_output(stream)

    def style(cell: str, _row: int) -> str:
        return Color.passed(cell, stream) if report.passed else Color.failed(cell, stream)

    headline = [[report.name, short_number(report.statistic), short_number(report.p_value), _passfail(report)]]
    render_table(["check", "statistic", "p-value", "result"], headline, pretty,
                 cell_formatters=[None, None, None, style], stream=stream)
    if show_rows and report.rows:
        headers, cells = summary_rows(report.rows)
        print(file=stream)
        render_table(headers, cells, pretty, stream=stream)


def _finish(args: argparse.Namespace, report: TestReport, plan: ExperimentPlan | None = None) -> int:
    if plan is None:
        emit(args, [report.as_record()])
    else:
        emit_plan(args, plan, [report.as_record()])
    print_summary(report)
    return EXIT_OK if report.passed else EXIT_TEST_FAILED


# ---------------------------------------------------------------------------
# Deterministic checks
# ---------------------------------------------------------------------------


def duality_report(
    p: PolymerParams,
    d: Direction,
    points: int = 10,
    tol: float = 1e-4,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> TestReport:
    """J* against Lambda on xi in [0, 0.9 mu]; on the diagonal also the closed form."""
    xis = np.linspace(0.0, 0.9 * p.mu, points).tolist()
    gap, table = rates.duality_gap(p, d, xis, cfg)
    rows = [{"xi": xi, "legendre": dual, "lmgf": lmgf, "diff": abs(dual - lmgf)} for xi, dual, lmgf in table]
    closed_gap = 0.0
    if d.s == d.t:
        for row in rows:
            closed = rates.lambda_diagonal(p, d.t, row["xi"])
            row["closed_form"] = closed
            closed_gap = max(closed_gap, abs(closed - row["lmgf"]))
    passed = gap < tol and closed_gap < 1e-8
    return TestReport(
        "duality", gap, 1.0 if passed else 0.0, passed, level=tol,
        metadata={"mu": p.mu, "s": d.s, "t": d.t, "closed_form_gap": closed_gap},
        rows=rows,
    )


def decomposition_report(
    p: PolymerParams,
    d: Direction,
    offsets: tuple[float, ...] = (0.1, 0.5, 1.0),
    tol: float = 1e-4,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> TestReport:
    """R_s(r) against inf over a of H^a(r) for r above the LLN point -s Psi0(theta)."""
    theta = p.require_theta()
    base = -d.s * digamma(theta)
    rows = []
    for offset in offsets:
        r = base + offset
        direct = rates.R_s(p, d.s, r)
        decomposed = rates.decomposition_rate(p, d, r, cfg)
        rows.append({"r": r, "r_s": direct, "inf_h": decomposed.value, "a_star": decomposed.minimizers[0],
                     "diff": abs(direct - decomposed.value)})
    worst = max(row["diff"] for row in rows)
    passed = worst <= tol
    return TestReport(
        "decomp-identity", worst, 1.0 if passed else 0.0, passed, level=tol,
        metadata={"mu": p.mu, "theta": theta, "s": d.s, "t": d.t},
        rows=rows,
    )


def transitions_report(p: PolymerParams, d: Direction, points: int = 30, cfg: SolverConfig = DEFAULT_CONFIG) -> TestReport:
    """trans1 => trans2 on a xi grid in [0, theta), and Lambda_theta = max(Lambda_hor, Lambda_ver)."""
    theta = p.require_theta()
    mu = p.mu
    trans1 = rates.trans1_holds(p, d)
    limit = min(theta, mu - theta)
    rows = []
    passed = True
    for xi in np.linspace(0.0, theta, points, endpoint=False).tolist():
        trans2 = rates.trans2_holds(p, d, xi)
        row = {"xi": xi, "trans1": trans1, "trans2": trans2}
        ok = trans2 or not trans1
        if xi < limit:
            stationary = rates.lambda_stationary(p, d, xi)
            combined = max(rates.lambda_hor(p, d, xi, cfg), rates.lambda_ver(p, d, xi, cfg))
            row["lmgf_stationary"] = stationary
            row["max_hor_ver"] = combined
            ok = ok and math.isclose(stationary, combined, rel_tol=1e-10, abs_tol=1e-12)
        row["ok"] = ok
        passed = passed and ok
        rows.append(row)
    return TestReport(
        "transitions", float(sum(not row["ok"] for row in rows)), 1.0 if passed else 0.0, passed,
        metadata={"mu": mu, "theta": theta, "s": d.s, "t": d.t, "trans1": trans1},
        rows=rows,
    )


def epsilon_report(p: PolymerParams, slope_tol: float = 0.02, intercept_tol: float = 0.05,
                   cfg: SolverConfig = DEFAULT_CONFIG) -> TestReport:
    """log-log slope 3/2 and intercept ln C of I_{1,1}(p + eps)."""
    slope, intercept = rates.epsilon_fit(p, cfg)
    expected = math.log(rates.asymptotic_constant(p))
    passed = abs(slope - 1.5) <= slope_tol and abs(intercept - expected) <= intercept_tol
    return TestReport(
        "epsilon-fit", slope, 1.0 if passed else 0.0, passed, level=slope_tol,
        metadata={"mu": p.mu, "slope": slope, "intercept": intercept, "expected_intercept": expected},
    )


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def handle_verify_duality(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args), direction_from_args(args), solver_config_from_args(args)
    return _finish(args, duality_report(p, d, args.grid, args.tol if args.tol is not None else 1e-4, cfg))


def handle_verify_decomp_identity(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    return _finish(args, decomposition_report(p, d, tol=args.tol if args.tol is not None else 1e-4, cfg=cfg))


def handle_verify_transitions(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    return _finish(args, transitions_report(p, d, args.grid, cfg))


def handle_verify_epsilon_fit(args: argparse.Namespace) -> int:
    p, cfg = params_from_args(args), solver_config_from_args(args)
    return _finish(args, epsilon_report(p, cfg=cfg))


def handle_verify_mean_identity(args: argparse.Namespace) -> int:
    plan = plan_from_args(args, "mean", stationary=True)
    return _finish(args, montecarlo.mean_identity_test(plan), plan)


def handle_verify_lln(args: argparse.Namespace) -> int:
    plan = plan_from_args(args, "lln", sizes=(64, 512), replicas=50)
    return _finish(args, montecarlo.lln_test(plan, tol=args.tol if args.tol is not None else 0.05), plan)


def handle_verify_burke(args: argparse.Namespace) -> int:
    plan = plan_from_args(args, "burke", stationary=True, sizes=(512,), seeds=tuple(range(20)))
    return _finish(args, montecarlo.burke_ks_test(plan, control=args.control), plan)


def handle_verify_variance_scan(args: argparse.Namespace) -> int:
    plan = plan_from_args(args, "variance", stationary=True, sizes=(64, 128, 256, 512), replicas=400)
    return _finish(args, montecarlo.variance_exponent_scan(plan), plan)
