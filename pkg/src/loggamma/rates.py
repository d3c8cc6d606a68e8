"""Free energies, rate functions and l.m.g.f.'s of the log-gamma polymer.

Conventions: ``M_mu(xi) = ln Gamma(mu - xi) - ln Gamma(mu)`` is the l.m.g.f. of
``log Y`` when ``1/Y ~ Gamma(mu)``. Infinite values are plain ``math.inf``;
it is absorbing under ``+`` and ``max`` so branch formulas compose directly.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .constants import INF
from .errors import ConsistencyError, UsageError
from .solvers import DEFAULT_CONFIG, SolverConfig, bracketed_root, golden_section
from .specfun import digamma, inv_digamma, log_gamma, tetragamma, trigamma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolymerParams:
    """Bulk shape ``mu`` and optional boundary shape ``theta`` in (0, mu)."""

    mu: float
    theta: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise UsageError(f"mu must be finite and > 0, got {self.mu!r}")
        if self.theta is not None and not 0 < self.theta < self.mu:
            raise UsageError(f"theta must lie in (0, mu) = (0, {self.mu!r}), got {self.theta!r}")

    def require_theta(self) -> float:
        if self.theta is None:
            raise UsageError("this quantity needs the boundary parameter theta")
        return self.theta

    def dual(self) -> PolymerParams:
        """Parameters after the swap theta <-> mu - theta."""
        return PolymerParams(self.mu, self.mu - self.require_theta())


@dataclass(frozen=True)
class Direction:
    """Macroscopic endpoint (s, t) of the polymer."""

    s: float
    t: float

    def __post_init__(self) -> None:
        for name in ("s", "t"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise UsageError(f"direction coordinate {name} must be finite and >= 0, got {value!r}")

    @property
    def is_origin(self) -> bool:
        return self.s == 0 and self.t == 0

    @property
    def is_interior(self) -> bool:
        return self.s > 0 and self.t > 0

    def swapped(self) -> Direction:
        return Direction(self.t, self.s)

    def require_interior(self) -> None:
        if not self.is_interior:
            raise UsageError(f"direction must have s, t > 0, got ({self.s!r}, {self.t!r})")


@dataclass(frozen=True)
class VariationalResult:
    """Optimised value with its interior minimisers or roots and diagnostics."""

    value: float
    minimizers: tuple[float, ...] = ()
    residual: float = 0.0
    iterations: int = 0

    def as_record(self) -> dict:
        return {
            "value": self.value,
            "minimizers": list(self.minimizers),
            "residual": self.residual,
            "iterations": self.iterations,
        }


def lmgf_logY(mu: float, xi: float) -> float:
    """M_mu(xi) = ln Gamma(mu - xi) - ln Gamma(mu), infinite for xi >= mu."""
    if xi >= mu:
        return INF
    if xi == 0:
        return 0.0
    return log_gamma(mu - xi) - log_gamma(mu)


def _monotone_root(
    h: Callable[[float], float],
    lo: float,
    hi: float,
    positive_at_lo: bool,
    cfg: SolverConfig,
):
    """Root of a strictly monotone h on the open interval (lo, hi) with poles at both ends."""
    mid = 0.5 * (lo + hi)
    h_mid = h(mid)
    if h_mid == 0.0:
        return bracketed_root(h, mid, lo, cfg)
    same_side_as_lo = (h_mid > 0.0) == positive_at_lo
    return bracketed_root(h, mid, hi if same_side_as_lo else lo, cfg)


# ---------------------------------------------------------------------------
# Free energies
# ---------------------------------------------------------------------------


def free_energy_pp(p: PolymerParams, d: Direction, cfg: SolverConfig = DEFAULT_CONFIG) -> VariationalResult:
    """Point-to-point free energy p_mu(s, t) = inf_rho {-s Psi0(rho) - t Psi0(mu - rho)}."""
    mu, s, t = p.mu, d.s, d.t
    if d.is_origin:
        raise UsageError("free energy needs s + t > 0")
    if s == 0:
        return VariationalResult(-t * digamma(mu))
    if t == 0:
        return VariationalResult(-s * digamma(mu))

    def slope(rho: float) -> float:
        return s * trigamma(rho) - t * trigamma(mu - rho)

    root = _monotone_root(slope, 0.0, mu, positive_at_lo=True, cfg=cfg)
    rho = root.root
    value = -s * digamma(rho) - t * digamma(mu - rho)
    logger.debug("free_energy_pp mu=%g s=%g t=%g rho*=%.15g iterations=%d", mu, s, t, rho, root.iterations)
    return VariationalResult(value, (rho,), root.residual, root.iterations)


def free_energy_stationary(p: PolymerParams, d: Direction) -> float:
    """LLN of the stationary model: -s Psi0(theta) - t Psi0(mu - theta)."""
    theta = p.require_theta()
    return -d.s * digamma(theta) - d.t * digamma(p.mu - theta)


def free_energy_line(p: PolymerParams, s: float, cfg: SolverConfig = DEFAULT_CONFIG) -> VariationalResult:
    """Point-to-line free energy over paths of length ns; equal to p_mu(s/2, s/2)."""
    if not s > 0:
        raise UsageError(f"point-to-line length s must be > 0, got {s!r}")
    return free_energy_pp(p, Direction(0.5 * s, 0.5 * s), cfg)


# ---------------------------------------------------------------------------
# Right-tail rate functions
# ---------------------------------------------------------------------------


def _cramer(shape: float, r: float) -> float:
    """Cramer rate of log U for 1/U ~ Gamma(shape)."""
    x = inv_digamma(-r)
    value = -r * x - log_gamma(x) + shape * r + log_gamma(shape)
    return max(value, 0.0)


def cramer_logY(p: PolymerParams, r: float) -> float:
    """Cramer rate function I_mu(r) of a single log-gamma weight."""
    return _cramer(p.mu, r)


def rate_I(p: PolymerParams, d: Direction, r: float, cfg: SolverConfig = DEFAULT_CONFIG) -> VariationalResult:
    """I_{s,t}(r) = f_r(theta2) - f_r(theta1) for r above p_mu(s, t), infinite below.

    f_r(theta) = r theta + t lnGamma(theta) - s lnGamma(mu - theta). Its
    derivative peaks at the root theta* of t Psi1(theta) = s Psi1(mu - theta)
    with height r - p_mu(s, t); theta1 < theta* < theta2 are the zeros on
    either side.
    """
    d.require_interior()
    mu, s, t = p.mu, d.s, d.t
    free = free_energy_pp(p, d, cfg)
    peak = mu - free.minimizers[0]
    if r < free.value:
        return VariationalResult(INF, (), free.residual, free.iterations)

    def slope(theta: float) -> float:
        return r + t * digamma(theta) + s * digamma(mu - theta)

    if r == free.value or slope(peak) <= 0.0:
        return VariationalResult(0.0, (peak, peak), free.residual, free.iterations)

    def f_r(theta: float) -> float:
        return r * theta + t * log_gamma(theta) - s * log_gamma(mu - theta)

    left = bracketed_root(slope, peak, 0.0, cfg)
    right = bracketed_root(slope, peak, mu, cfg)
    value = max(f_r(right.root) - f_r(left.root), 0.0)
    logger.debug(
        "rate_I mu=%g s=%g t=%g r=%.15g theta1=%.15g theta2=%.15g", mu, s, t, r, left.root, right.root
    )
    return VariationalResult(
        value,
        (left.root, right.root),
        max(free.residual, left.residual, right.residual),
        free.iterations + left.iterations + right.iterations,
    )


def rate_J(p: PolymerParams, d: Direction, r: float, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Right-tail rate J_{s,t}(r): zero up to the free energy, I_{s,t} above it.

    Boundary directions reduce to i.i.d. sums (right branch of the Cramer rate)
    and the origin to rate_J_origin.
    """
    if d.is_origin:
        return rate_J_origin(p, r)
    if not d.is_interior:
        length = d.s + d.t
        if r <= -length * digamma(p.mu):
            return 0.0
        return length * _cramer(p.mu, r / length)
    if r <= free_energy_pp(p, d, cfg).value:
        return 0.0
    return rate_I(p, d, r, cfg).value


def rate_J_origin(p: PolymerParams, r: float) -> float:
    """J at the origin: 0 for r <= 0 and mu * r above (limiting slope of I_mu)."""
    return 0.0 if r <= 0 else p.mu * r


def rate_line(p: PolymerParams, s: float, r: float, cfg: SolverConfig = DEFAULT_CONFIG) -> VariationalResult:
    """Point-to-line rate for paths of length ns: I_{s/2, s/2}(r)."""
    if not s > 0:
        raise UsageError(f"point-to-line length s must be > 0, got {s!r}")
    return rate_I(p, Direction(0.5 * s, 0.5 * s), r, cfg)


def asymptotic_constant(p: PolymerParams) -> float:
    """C with I_{1,1}(p + eps) ~ C eps^{3/2}: (4/3) |Psi2(mu/2)|^{-1/2}."""
    return (4.0 / 3.0) / math.sqrt(abs(tetragamma(0.5 * p.mu)))


# ---------------------------------------------------------------------------
# Logarithmic moment generating functions
# ---------------------------------------------------------------------------


def lambda_iid(p: PolymerParams, d: Direction, xi: float, cfg: SolverConfig = DEFAULT_CONFIG) -> VariationalResult:
    """Lambda_{s,t}(xi) of the i.i.d. model.

    p_mu(s,t) xi below zero, inf over theta in (xi, mu) of
    t M_theta(xi) - s M_{mu-theta}(-xi) on [0, mu), infinite from mu on.
    A boundary direction is an i.i.d. sum with l.m.g.f. (s + t) M_mu(xi).
    """
    mu, s, t = p.mu, d.s, d.t
    if d.is_origin:
        raise UsageError("l.m.g.f. needs s + t > 0")
    if not d.is_interior:
        return VariationalResult((s + t) * lmgf_logY(mu, xi) if xi < mu else INF)
    if xi >= mu:
        return VariationalResult(INF)
    if xi < 0:
        free = free_energy_pp(p, d, cfg)
        return VariationalResult(free.value * xi, (), free.residual, free.iterations)
    if xi == 0:
        return VariationalResult(0.0)

    def objective(theta: float) -> float:
        return t * lmgf_logY(theta, xi) - s * lmgf_logY(mu - theta, -xi)

    def slope(theta: float) -> float:
        return t * (digamma(theta - xi) - digamma(theta)) + s * (digamma(mu - theta + xi) - digamma(mu - theta))

    root = _monotone_root(slope, xi, mu, positive_at_lo=False, cfg=cfg)
    return VariationalResult(objective(root.root), (root.root,), root.residual, root.iterations)


def lambda_diagonal(p: PolymerParams, t: float, xi: float) -> float:
    """Closed form on the diagonal: 2t (lnGamma((mu-xi)/2) - lnGamma((mu+xi)/2)) for 0 <= xi < mu."""
    if not 0 <= xi < p.mu:
        raise UsageError(f"diagonal closed form needs 0 <= xi < mu, got {xi!r}")
    return 2.0 * t * (log_gamma(0.5 * (p.mu - xi)) - log_gamma(0.5 * (p.mu + xi)))


def lambda_iid_dual_check(
    p: PolymerParams, d: Direction, xi: float, cfg: SolverConfig = DEFAULT_CONFIG
) -> VariationalResult:
    """Evaluate both dual formulas of Lambda_{s,t}(xi) and insist that they agree.

    The first minimises t M_rho(xi) - s M_{mu-rho}(-xi) over rho, the second
    s M_theta(xi) - t M_{mu-theta}(-xi) over theta; the minimisers satisfy
    rho* = mu + xi - theta*. Returns the common value with (rho*, theta*).
    """
    d.require_interior()
    if not 0 <= xi < p.mu:
        raise UsageError(f"dual check needs 0 <= xi < mu, got {xi!r}")
    first = lambda_iid(p, d, xi, cfg)
    second = lambda_iid(p, d.swapped(), xi, cfg)
    gap = abs(first.value - second.value)
    if gap > 10.0 * cfg.opt_tol:
        raise ConsistencyError(f"dual l.m.g.f. formulas disagree by {gap:.3g} at xi={xi!r}", residual=gap)
    if not first.minimizers:
        return VariationalResult(first.value)
    rho, theta = first.minimizers[0], second.minimizers[0]
    mismatch = abs(rho - (p.mu + xi - theta))
    if mismatch > 1e-8 * max(1.0, p.mu):
        raise ConsistencyError(f"minimisers violate rho* = mu + xi - theta* by {mismatch:.3g}", residual=mismatch)
    return VariationalResult(
        0.5 * (first.value + second.value),
        (rho, theta),
        max(first.residual, second.residual, gap),
        first.iterations + second.iterations,
    )


def lambda_stationary(p: PolymerParams, d: Direction, xi: float) -> float:
    """Lambda_{theta,(s,t)}(xi) of the stationary model for xi >= 0."""
    theta = p.require_theta()
    mu, s, t = p.mu, d.s, d.t
    if xi < 0:
        raise UsageError("the stationary l.m.g.f. is only available for xi >= 0")
    if xi >= min(theta, mu - theta):
        return INF
    horizontal = s * lmgf_logY(theta, xi) - t * lmgf_logY(mu - theta, -xi)
    vertical = t * lmgf_logY(mu - theta, xi) - s * lmgf_logY(theta, -xi)
    return max(horizontal, vertical)


# ---------------------------------------------------------------------------
# Horizontal / vertical exits and their transitions
# ---------------------------------------------------------------------------


def trans1_holds(p: PolymerParams, d: Direction) -> bool:
    """s Psi1(theta) >= t Psi1(mu - theta)."""
    theta = p.require_theta()
    return d.s * trigamma(theta) >= d.t * trigamma(p.mu - theta)


def trans2_holds(p: PolymerParams, d: Direction, xi: float) -> bool:
    """s (Psi0(theta) - Psi0(theta - xi)) >= t (Psi0(mu - theta + xi) - Psi0(mu - theta))."""
    theta = p.require_theta()
    if not 0 <= xi < theta:
        raise UsageError(f"transition condition needs 0 <= xi < theta = {theta!r}, got {xi!r}")
    if xi == 0:
        return True
    mu = p.mu
    lhs = d.s * (digamma(theta) - digamma(theta - xi))
    rhs = d.t * (digamma(mu - theta + xi) - digamma(mu - theta))
    return lhs >= rhs


def p_hor(p: PolymerParams, d: Direction, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Free energy of paths whose first step is horizontal."""
    if trans1_holds(p, d):
        return free_energy_stationary(p, d)
    return free_energy_pp(p, d, cfg).value


def lambda_hor(p: PolymerParams, d: Direction, xi: float, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """l.m.g.f. of the horizontal-exit partition function for 0 <= xi < theta."""
    theta = p.require_theta()
    if trans2_holds(p, d, xi):
        return d.s * lmgf_logY(theta, xi) - d.t * lmgf_logY(p.mu - theta, -xi)
    return lambda_iid(p, d, xi, cfg).value


def lambda_ver(p: PolymerParams, d: Direction, xi: float, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Vertical analogue of lambda_hor for 0 <= xi < mu - theta (swap s/t and theta/mu-theta)."""
    return lambda_hor(p.dual(), d.swapped(), xi, cfg)


def characteristic_direction(p: PolymerParams, c: float = 1.0) -> Direction:
    """c (Psi1(mu - theta), Psi1(theta))."""
    theta = p.require_theta()
    if not c > 0:
        raise UsageError(f"scale c must be > 0, got {c!r}")
    return Direction(c * trigamma(p.mu - theta), c * trigamma(theta))


# ---------------------------------------------------------------------------
# Exit-point decomposition of the stationary boundary sums
# ---------------------------------------------------------------------------


def R_s(p: PolymerParams, s: float, r: float) -> float:
    """Right branch of the Cramer rate of sum_{i <= ns} log U, 1/U ~ Gamma(theta)."""
    theta = p.require_theta()
    if s < 0:
        raise UsageError(f"s must be >= 0, got {s!r}")
    if s == 0:
        return 0.0 if r <= 0 else INF
    if r < -s * digamma(theta):
        return 0.0
    return s * _cramer(theta, r / s)


def R_s_dual(p: PolymerParams, s: float, xi: float) -> float:
    """Convex dual of R_s: s (lnGamma(theta - xi) - lnGamma(theta)) on [0, theta)."""
    theta = p.require_theta()
    if s < 0:
        raise UsageError(f"s must be >= 0, got {s!r}")
    if not 0 <= xi < theta:
        return INF
    return s * lmgf_logY(theta, xi)


def _check_split(d: Direction, a: float) -> None:
    if not -d.t <= a <= d.s:
        raise UsageError(f"split point a must lie in [-t, s] = [{-d.t!r}, {d.s!r}], got {a!r}")


def vbar(a: float, d: Direction) -> Direction:
    """Macroscopic exit point: (0, -a) on the vertical axis, (a, 0) on the horizontal one."""
    _check_split(d, a)
    if a <= 0:
        return Direction(0.0, abs(a))
    return Direction(a, 0.0)


def kappa_star(p: PolymerParams, d: Direction, a: float, xi: float) -> float:
    """Convex dual of kappa_a; note the jump as a crosses 0."""
    theta = p.require_theta()
    _check_split(d, a)
    mu, t = p.mu, d.t
    if a <= 0:
        if xi < 0:
            return INF
        return (t + a) * lmgf_logY(mu - theta, -xi)
    if not 0 <= xi < theta:
        return INF
    return t * lmgf_logY(mu - theta, -xi) + a * lmgf_logY(theta, xi)


def m_kappa(p: PolymerParams, d: Direction, a: float) -> float:
    """LLN limit of the boundary factor; continuous in a."""
    theta = p.require_theta()
    _check_split(d, a)
    if a <= 0:
        return (d.t + a) * digamma(p.mu - theta)
    return d.t * digamma(p.mu - theta) - a * digamma(theta)


def kappa(p: PolymerParams, d: Direction, a: float, r: float, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """kappa_a(r) = sup_{xi >= 0} {xi r - kappa*_a(xi)}."""
    theta = p.require_theta()
    mu, t = p.mu, d.t
    if r <= m_kappa(p, d, a):
        return 0.0
    if a <= 0:
        weight = t + a
        if weight == 0:
            return INF
        x = inv_digamma(r / weight)
        return (x - (mu - theta)) * r - weight * (log_gamma(x) - log_gamma(mu - theta))

    def slope(xi: float) -> float:
        return r - t * digamma(mu - theta + xi) + a * digamma(theta - xi)

    root = bracketed_root(slope, 0.0, theta, cfg)
    return max(root.root * r - kappa_star(p, d, a, root.root), 0.0)


def _free_energy_any(p: PolymerParams, d: Direction, cfg: SolverConfig) -> float:
    return 0.0 if d.is_origin else free_energy_pp(p, d, cfg).value


def inf_convolution_H(
    p: PolymerParams,
    d: Direction,
    a: float,
    b: float,
    r: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """H^{a,b}(r): inf over x of kappa_a(x) + J_{(s,t) - vbar(b)}(r - x)."""
    _check_split(d, a)
    exit_point = vbar(b, d)
    rest = Direction(d.s - exit_point.s, d.t - exit_point.t)
    low = m_kappa(p, d, a)
    high = r - _free_energy_any(p, rest, cfg)
    if high <= low:
        return 0.0

    def total(x: float) -> float:
        return kappa(p, d, a, x, cfg) + rate_J(p, rest, r - x, cfg)

    _, value, _ = golden_section(total, low, high, tol=cfg.opt_tol, max_iter=cfg.max_iter)
    return value


def decomposition_rate(
    p: PolymerParams,
    d: Direction,
    r: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
    points: int = 41,
) -> VariationalResult:
    """inf over a in [-t, s] of H^{a,a}(r).

    Scans an a-grid that contains 0, then refines next to the best grid point
    without crossing a = 0, where kappa_a jumps.
    """
    d.require_interior()
    grid = sorted(set(np.linspace(-d.t, d.s, points).tolist()) | {0.0})

    def h(a: float) -> float:
        return inf_convolution_H(p, d, a, a, r, cfg)

    values = [h(a) for a in grid]
    best = int(np.argmin(values))
    best_a, best_value = grid[best], values[best]
    windows = []
    if best > 0:
        windows.append((grid[best - 1], grid[best]))
    if best < len(grid) - 1:
        lo = grid[best]
        if lo == 0.0:
            lo = min(cfg.bracket_margin, 0.5 * grid[best + 1])
        windows.append((lo, grid[best + 1]))
    iterations = 0
    for lo, hi in windows:
        a, value, steps = golden_section(h, lo, hi, tol=1e-6, max_iter=cfg.max_iter)
        iterations += steps
        if value < best_value:
            best_a, best_value = a, value
    return VariationalResult(best_value, (best_a,), 0.0, iterations)


# ---------------------------------------------------------------------------
# Numeric convex duality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledFunction:
    """A function tabulated on a sorted grid, optionally kept for refinement."""

    grid: np.ndarray
    values: np.ndarray
    func: Callable[[float], float] | None = field(default=None, compare=False)


def sample_function(f: Callable[[float], float], grid: Sequence[float]) -> SampledFunction:
    xs = np.asarray(grid, dtype=float)
    return SampledFunction(xs, np.array([f(x) for x in xs], dtype=float), f)


def legendre_transform(f: SampledFunction, xi: float, tol: float = 1e-12) -> float:
    """sup_x {xi x - f(x)} over the grid, refined between the neighbours of the best node."""
    if f.grid.size == 0:
        raise UsageError("legendre_transform needs a non-empty grid")
    scores = xi * f.grid - f.values
    k = int(np.argmax(scores))
    best = float(scores[k])
    if f.func is None or f.grid.size == 1:
        return best
    lo = float(f.grid[max(k - 1, 0)])
    hi = float(f.grid[min(k + 1, f.grid.size - 1)])
    func = f.func
    _, value, _ = golden_section(lambda x: func(x) - xi * x, lo, hi, tol=tol)
    return max(best, -value)


def rate_grid(
    p: PolymerParams, d: Direction, xi_max: float, cfg: SolverConfig = DEFAULT_CONFIG, points: int = 600
) -> SampledFunction:
    """rate_J tabulated far enough right that slopes up to xi_max are reached."""
    free = free_energy_pp(p, d, cfg).value
    reach = 2.0 * (d.s + d.t) / max(p.mu - xi_max, 1e-3 * p.mu) + 2.0
    grid = np.linspace(free - 1.0, free + reach, points)
    return sample_function(lambda r: rate_J(p, d, r, cfg), grid)


def duality_gap(
    p: PolymerParams,
    d: Direction,
    xis: Sequence[float],
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> tuple[float, list[tuple[float, float, float]]]:
    """Largest |J*(xi) - Lambda(xi)| over xis, with the (xi, J*, Lambda) rows."""
    d.require_interior()
    sampled = rate_grid(p, d, max(xis), cfg)
    rows = []
    for xi in xis:
        rows.append((xi, legendre_transform(sampled, xi), lambda_iid(p, d, xi, cfg).value))
    gap = max((abs(dual - lmgf) for _, dual, lmgf in rows), default=0.0)
    return gap, rows


def rate_from_lmgf(
    p: PolymerParams, d: Direction, r: float, cfg: SolverConfig = DEFAULT_CONFIG, points: int = 400
) -> float:
    """Numeric dual sup_{0 <= xi < mu} {xi r - Lambda(xi)}; equals rate_J above the free energy."""
    grid = np.linspace(0.0, p.mu * (1.0 - 1e-3), points)
    sampled = sample_function(lambda xi: lambda_iid(p, d, xi, cfg).value, grid)
    return legendre_transform(sampled, r)


def negated_dual_rate(p: PolymerParams, t: float, a: float, xi: float, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """G_xi(a) = -J*_{(t-a, t)}(xi) on [0, t], infinite outside."""
    if not 0 <= a <= t:
        return INF
    d = Direction(t - a, t)
    if d.is_interior:
        sampled = rate_grid(p, d, xi, cfg, points=300)
    else:
        free = -t * digamma(p.mu)
        grid = np.linspace(free - 1.0, free + 2.0 * t / max(p.mu - xi, 1e-3) + 2.0, 300)
        sampled = sample_function(lambda r: rate_J(p, d, r, cfg), grid)
    return -legendre_transform(sampled, xi)


def epsilon_fit(
    p: PolymerParams,
    cfg: SolverConfig = DEFAULT_CONFIG,
    eps: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Slope and intercept of ln I_{1,1}(p + eps) against ln eps."""
    eps_values = np.logspace(-4, -2, 9) if eps is None else np.asarray(eps, dtype=float)
    d = Direction(1.0, 1.0)
    free = free_energy_pp(p, d, cfg).value
    rates = np.array([rate_I(p, d, free + e, cfg).value for e in eps_values])
    slope, intercept = np.polyfit(np.log(eps_values), np.log(rates), 1)
    return float(slope), float(intercept)
