"""Compute command handlers: closed forms and variational quantities."""

from __future__ import annotations

import argparse
import logging
from typing import Any

from .. import rates, specfun
from ..errors import UsageError
from ..rates import VariationalResult
from .options import direction_from_args, emit, params_from_args, require, solver_config_from_args

logger = logging.getLogger(__name__)

SPECIAL_FUNCTIONS = {
    "lgamma": specfun.log_gamma,
    "digamma": specfun.digamma,
    "trigamma": specfun.trigamma,
    "tetragamma": specfun.tetragamma,
    "inv-digamma": specfun.inv_digamma,
}


def _inputs(args: argparse.Namespace, *names: str) -> dict:
    return {name: getattr(args, name, None) for name in names if getattr(args, name, None) is not None}


def _record(quantity: str, inputs: dict, result: VariationalResult | Any, **extra: Any) -> dict:
    """Uniform output record {quantity, inputs, value, minimizers, residual, iterations}."""
    if not isinstance(result, VariationalResult):
        result = VariationalResult(result)
    logger.debug("%s residual=%.3g iterations=%d", quantity, result.residual, result.iterations)
    record = {"quantity": quantity, "inputs": inputs, **result.as_record()}
    record.update(extra)
    return record


def _emit(args: argparse.Namespace, record: dict) -> int:
    emit(args, [record])
    return 0


def handle_compute_free_energy(args: argparse.Namespace) -> int:
    """Point-to-point free energy p_mu(s, t)."""
    p, d, cfg = params_from_args(args), direction_from_args(args), solver_config_from_args(args)
    return _emit(args, _record("free-energy", _inputs(args, "mu", "s", "t"), rates.free_energy_pp(p, d, cfg)))


def handle_compute_free_energy_line(args: argparse.Namespace) -> int:
    p, cfg = params_from_args(args), solver_config_from_args(args)
    (s,) = require(args, "s")
    return _emit(args, _record("free-energy-line", _inputs(args, "mu", "s"), rates.free_energy_line(p, s, cfg)))


def handle_compute_stationary(args: argparse.Namespace) -> int:
    p, d = params_from_args(args, need_theta=True), direction_from_args(args)
    value = rates.free_energy_stationary(p, d)
    return _emit(args, _record("stationary", _inputs(args, "mu", "theta", "s", "t"), value))


def handle_compute_rate(args: argparse.Namespace) -> int:
    """I_{s,t}(r), or the right-tail rate J_{s,t}(r) with --tail."""
    p, d, cfg = params_from_args(args), direction_from_args(args), solver_config_from_args(args)
    (r,) = require(args, "r")
    inputs = _inputs(args, "mu", "s", "t", "r")
    if args.tail:
        return _emit(args, _record("rate-tail", inputs, rates.rate_J(p, d, r, cfg)))
    return _emit(args, _record("rate", inputs, rates.rate_I(p, d, r, cfg)))


def handle_compute_rate_line(args: argparse.Namespace) -> int:
    p, cfg = params_from_args(args), solver_config_from_args(args)
    s, r = require(args, "s", "r")
    return _emit(args, _record("rate-line", _inputs(args, "mu", "s", "r"), rates.rate_line(p, s, r, cfg)))


def handle_compute_rate_origin(args: argparse.Namespace) -> int:
    p = params_from_args(args)
    (r,) = require(args, "r")
    return _emit(args, _record("rate-origin", _inputs(args, "mu", "r"), rates.rate_J_origin(p, r)))


def handle_compute_cramer(args: argparse.Namespace) -> int:
    p = params_from_args(args)
    (r,) = require(args, "r")
    return _emit(args, _record("cramer", _inputs(args, "mu", "r"), rates.cramer_logY(p, r)))


def handle_compute_lmgf(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args), direction_from_args(args), solver_config_from_args(args)
    (xi,) = require(args, "xi")
    return _emit(args, _record("lmgf", _inputs(args, "mu", "s", "t", "xi"), rates.lambda_iid(p, d, xi, cfg)))


def handle_compute_lmgf_dual(args: argparse.Namespace) -> int:
    """Both dual formulas of the i.i.d. l.m.g.f.; fails with exit 3 if they disagree."""
    p, d, cfg = params_from_args(args), direction_from_args(args), solver_config_from_args(args)
    (xi,) = require(args, "xi")
    result = rates.lambda_iid_dual_check(p, d, xi, cfg)
    return _emit(args, _record("lmgf-dual", _inputs(args, "mu", "s", "t", "xi"), result))


def handle_compute_lmgf_stationary(args: argparse.Namespace) -> int:
    p, d = params_from_args(args, need_theta=True), direction_from_args(args)
    (xi,) = require(args, "xi")
    value = rates.lambda_stationary(p, d, xi)
    return _emit(args, _record("lmgf-stationary", _inputs(args, "mu", "theta", "s", "t", "xi"), value))


def handle_compute_lmgf_hor(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    (xi,) = require(args, "xi")
    value = rates.lambda_hor(p, d, xi, cfg)
    return _emit(args, _record("lmgf-hor", _inputs(args, "mu", "theta", "s", "t", "xi"), value,
                               trans2=rates.trans2_holds(p, d, xi)))


def handle_compute_lmgf_ver(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    (xi,) = require(args, "xi")
    value = rates.lambda_ver(p, d, xi, cfg)
    return _emit(args, _record("lmgf-ver", _inputs(args, "mu", "theta", "s", "t", "xi"), value))


def handle_compute_p_hor(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    value = rates.p_hor(p, d, cfg)
    return _emit(args, _record("p-hor", _inputs(args, "mu", "theta", "s", "t"), value,
                               trans1=rates.trans1_holds(p, d)))


def handle_compute_trans(args: argparse.Namespace) -> int:
    """Transition predicates; trans2 only when --xi is given."""
    p, d = params_from_args(args, need_theta=True), direction_from_args(args)
    extra = {}
    if args.xi is not None:
        extra["trans2"] = rates.trans2_holds(p, d, args.xi)
    record = _record("trans", _inputs(args, "mu", "theta", "s", "t", "xi"), rates.trans1_holds(p, d), **extra)
    return _emit(args, record)


def handle_compute_char_dir(args: argparse.Namespace) -> int:
    p = params_from_args(args, need_theta=True)
    c = args.c if args.c is not None else 1.0
    direction = rates.characteristic_direction(p, c)
    record = _record("char-dir", _inputs(args, "mu", "theta", "c"), VariationalResult(0.0))
    record["value"] = [direction.s, direction.t]
    return _emit(args, record)


def handle_compute_r_s(args: argparse.Namespace) -> int:
    """R_s(r) with --r, its dual R*_s(xi) with --xi."""
    p = params_from_args(args, need_theta=True)
    (s,) = require(args, "s")
    if args.r is None and args.xi is None:
        raise UsageError("'compute r-s' needs --r or --xi")
    inputs = _inputs(args, "mu", "theta", "s", "r", "xi")
    extra = {}
    if args.xi is not None:
        extra["dual"] = rates.R_s_dual(p, s, args.xi)
    value = rates.R_s(p, s, args.r) if args.r is not None else extra.pop("dual")
    return _emit(args, _record("r-s", inputs, value, **extra))


def handle_compute_vbar(args: argparse.Namespace) -> int:
    d = direction_from_args(args)
    (a,) = require(args, "a")
    point = rates.vbar(a, d)
    record = _record("vbar", _inputs(args, "a", "s", "t"), VariationalResult(0.0))
    record["value"] = [point.s, point.t]
    return _emit(args, record)


def handle_compute_kappa(args: argparse.Namespace) -> int:
    """kappa_a(r) with m_kappa; kappa*_a(xi) as well when --xi is given."""
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    a, r = require(args, "a", "r")
    extra: dict = {"m_kappa": rates.m_kappa(p, d, a)}
    if args.xi is not None:
        extra["kappa_star"] = rates.kappa_star(p, d, a, args.xi)
    value = rates.kappa(p, d, a, r, cfg)
    return _emit(args, _record("kappa", _inputs(args, "mu", "theta", "s", "t", "a", "r", "xi"), value, **extra))


def handle_compute_infconv(args: argparse.Namespace) -> int:
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    a, r = require(args, "a", "r")
    b = args.b if args.b is not None else a
    value = rates.inf_convolution_H(p, d, a, b, r, cfg)
    return _emit(args, _record("infconv", _inputs(args, "mu", "theta", "s", "t", "a", "b", "r"), value))


def handle_compute_decomposition(args: argparse.Namespace) -> int:
    """inf over a of H^a next to R_s(r)."""
    p, d, cfg = params_from_args(args, need_theta=True), direction_from_args(args), solver_config_from_args(args)
    (r,) = require(args, "r")
    result = rates.decomposition_rate(p, d, r, cfg)
    return _emit(args, _record("decomposition", _inputs(args, "mu", "theta", "s", "t", "r"), result,
                               r_s=rates.R_s(p, d.s, r)))


def handle_compute_asymptotic_c(args: argparse.Namespace) -> int:
    p = params_from_args(args)
    return _emit(args, _record("asymptotic-c", _inputs(args, "mu"), rates.asymptotic_constant(p)))


def handle_compute_specfun(args: argparse.Namespace) -> int:
    fn, x = require(args, "fn", "x")
    value = SPECIAL_FUNCTIONS[fn](x)
    return _emit(args, _record("specfun", _inputs(args, "fn", "x"), value))
