"""Scalar root finding and one-dimensional minimisation with solver diagnostics."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

from scipy import optimize

from .constants import BRACKET_MARGIN, MAX_ITER, MIN_POLE_OFFSET, OPT_TOL, ROOT_TOL
from .errors import NumericError, UsageError

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances shared by every variational computation."""

    root_tol: float = ROOT_TOL
    opt_tol: float = OPT_TOL
    max_iter: int = MAX_ITER
    bracket_margin: float = BRACKET_MARGIN

    def __post_init__(self) -> None:
        for name in ("root_tol", "opt_tol", "max_iter", "bracket_margin"):
            value = getattr(self, name)
            if not value > 0:
                raise UsageError(f"SolverConfig.{name} must be positive, got {value!r}")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def find_root(f: Callable[[float], float], lo: float, hi: float, cfg: SolverConfig = DEFAULT_CONFIG) -> RootResult:
    """Return the root of f in [lo, hi]; f(lo) and f(hi) must differ in sign."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return RootResult(lo, 0.0, 0)
    if f_hi == 0.0:
        return RootResult(hi, 0.0, 0)
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NumericError(f"root not bracketed in [{lo!r}, {hi!r}]", residual=min(abs(f_lo), abs(f_hi)))
    root, info = optimize.brentq(
        f, lo, hi, xtol=cfg.root_tol * 1e-3, rtol=4.0 * 2.220446049250313e-16,
        maxiter=cfg.max_iter, full_output=True, disp=False,
    )
    residual = abs(f(root))
    if not info.converged:
        raise NumericError(f"brentq did not converge in [{lo!r}, {hi!r}]", residual=residual, iterations=info.iterations)
    return RootResult(root, residual, info.iterations)


def expand_toward_pole(
    f: Callable[[float], float],
    inner: float,
    edge: float,
    want_positive: bool,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """Walk from ``edge + margin`` toward ``edge`` until f has the wanted sign.

    ``edge`` is an open endpoint at which f has a pole; ``inner`` is a point on
    the other side of the root. The offset from the edge starts at the bracket
    margin and shrinks geometrically.
    """
    direction = 1.0 if inner > edge else -1.0
    offset = min(cfg.bracket_margin, 0.5 * abs(inner - edge))
    last = math.nan
    while offset >= MIN_POLE_OFFSET:
        x = edge + direction * offset
        if x == edge:
            break
        last = f(x)
        if (last > 0.0) == want_positive and last != 0.0:
            return x
        offset *= 1e-3
    raise NumericError(f"no bracket between {edge!r} and {inner!r}", residual=abs(last))


def bracketed_root(
    f: Callable[[float], float],
    inner: float,
    edge: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> RootResult:
    """Root of a monotone f between ``inner`` and a pole at ``edge``."""
    f_inner = f(inner)
    if f_inner == 0.0:
        return RootResult(inner, 0.0, 0)
    near = expand_toward_pole(f, inner, edge, want_positive=f_inner < 0.0, cfg=cfg)
    lo, hi = sorted((near, inner))
    return find_root(f, lo, hi, cfg)


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = OPT_TOL,
    max_iter: int = MAX_ITER,
) -> tuple[float, float, int]:
    """Minimise a unimodal f on [lo, hi]; return (x, f(x), iterations).

    Golden-section variant of ternary search: one new evaluation per step.
    Infinite values are allowed and compare as usual.
    """
    if hi < lo:
        raise UsageError(f"empty search interval [{lo!r}, {hi!r}]")
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    iterations = 0
    while b - a > tol * max(1.0, abs(a) + abs(b)) and iterations < max_iter:
        iterations += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    best = min(((lo, f(lo)), (c, fc), (d, fd), (hi, f(hi))), key=lambda pair: pair[1])
    return best[0], best[1], iterations
