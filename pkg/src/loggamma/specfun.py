"""Log-gamma and polygamma functions on the positive half-line.

Every function shifts its argument upward with the functional recurrence until
it reaches ``ASYMPTOTIC_THRESHOLD`` and then sums the Stirling/Bernoulli series.
On [0.5, 2.5) ln Gamma is taken from its Taylor series around 2 instead, so
the zeros at 1 and 2 keep full relative accuracy.
Only real arguments in (0, inf) are supported.
"""

from __future__ import annotations

import math

from scipy.special import zetac

from .constants import (
    ASYMPTOTIC_THRESHOLD,
    EULER_GAMMA,
    INV_DIGAMMA_MAX_ITER,
    INV_DIGAMMA_SWITCH,
    MAX_LOG_FLOAT,
)
from .errors import DomainError, NumericError

HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# zeta(k) - 1, k = 2..41, for the Taylor series of ln Gamma around 1 and 2
_ZETA_MINUS_ONE = tuple(float(zetac(k)) for k in range(2, 42))
# ln Gamma has zeros at 1 and 2; on this window the recurrence loses relative accuracy
_NEAR_ZEROS = (0.5, 2.5)

# B_{2k} / (2k (2k-1)), k = 1..8
_LOG_GAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# B_{2k} / (2k)
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)

# B_{2k}
_TRIGAMMA_COEFFS = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)

# (2k + 1) B_{2k}
_TETRAGAMMA_COEFFS = (
    1.0 / 2.0,
    -1.0 / 6.0,
    1.0 / 6.0,
    -3.0 / 10.0,
    5.0 / 6.0,
    -691.0 / 210.0,
    35.0 / 2.0,
    -3617.0 / 30.0,
)


def _check(x: float, name: str) -> float:
    """Return x as a float or raise DomainError outside (0, inf)."""
    try:
        value = float(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name}: argument must be a real number, got {x!r}") from exc
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name}: argument must be finite and > 0, got {value!r}")
    return value


def _series(coeffs: tuple[float, ...], z: float) -> float:
    """Evaluate sum_k coeffs[k] * z**(k+1) by Horner's rule."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc * z


def _log_gamma_2p(z: float) -> float:
    """ln Gamma(2 + z) for |z| <= 0.5.

    ln Gamma(2 + z) = z (1 - gamma) + sum_k (-1)^k (zeta(k) - 1) z^k / k, k >= 2
    """
    acc = 0.0
    for k in range(len(_ZETA_MINUS_ONE) + 1, 1, -1):
        acc = acc * -z + _ZETA_MINUS_ONE[k - 2] / k
    return z * (1.0 - EULER_GAMMA) + acc * z * z


def log_gamma(x: float) -> float:
    """Return ln Gamma(x) for x > 0."""
    x = _check(x, "log_gamma")
    low, high = _NEAR_ZEROS
    if low <= x < 1.5:
        z = x - 1.0
        return _log_gamma_2p(z) - math.log1p(z)
    if 1.5 <= x < high:
        return _log_gamma_2p(x - 2.0)
    product = 1.0
    while x < ASYMPTOTIC_THRESHOLD:
        product *= x
        x += 1.0
    z = 1.0 / (x * x)
    stirling = (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + x * _series(_LOG_GAMMA_COEFFS, z)
    if product == 1.0:
        return stirling
    return stirling - math.log(product)


def digamma(x: float) -> float:
    """Return Psi0(x) = Gamma'(x) / Gamma(x) for x > 0."""
    x = _check(x, "digamma")
    shift = 0.0
    while x < ASYMPTOTIC_THRESHOLD:
        shift -= 1.0 / x
        x += 1.0
    z = 1.0 / (x * x)
    return shift + math.log(x) - 0.5 / x - _series(_DIGAMMA_COEFFS, z)


def trigamma(x: float) -> float:
    """Return Psi1(x), the derivative of digamma, for x > 0."""
    x = _check(x, "trigamma")
    shift = 0.0
    while x < ASYMPTOTIC_THRESHOLD:
        shift += 1.0 / (x * x)
        x += 1.0
    z = 1.0 / (x * x)
    return shift + 1.0 / x + 0.5 * z + _series(_TRIGAMMA_COEFFS, z) / x


def tetragamma(x: float) -> float:
    """Return Psi2(x), the second derivative of digamma, for x > 0."""
    x = _check(x, "tetragamma")
    shift = 0.0
    while x < ASYMPTOTIC_THRESHOLD:
        shift -= 2.0 / (x * x * x)
        x += 1.0
    z = 1.0 / (x * x)
    return shift - z - z / x - z * _series(_TETRAGAMMA_COEFFS, z)


def inv_digamma(y: float, tol: float = 1e-12, max_iter: int = INV_DIGAMMA_MAX_ITER) -> float:
    """Return the unique x > 0 with digamma(x) = y.

    Newton's method from the usual two-regime starting point. Every evaluation
    tightens a bracket [lo, hi] around the root; a Newton step that leaves the
    bracket is replaced by bisection, which keeps the iteration inside (0, inf).
    """
    y = float(y)
    if not math.isfinite(y):
        raise DomainError(f"inv_digamma: argument must be finite, got {y!r}")
    if y > MAX_LOG_FLOAT:
        raise NumericError(f"inv_digamma({y!r}) is not representable as a float", residual=math.inf)
    if y >= INV_DIGAMMA_SWITCH:
        try:
            x = math.exp(y) + 0.5
        except OverflowError as exc:
            raise NumericError(f"inv_digamma({y!r}) is not representable as a float", residual=math.inf) from exc
    else:
        x = -1.0 / (y + EULER_GAMMA)
    lo, hi = 0.0, math.inf
    scale = max(1.0, abs(y))
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        residual = digamma(x) - y
        if residual == 0.0:
            return x
        if residual < 0.0:
            lo = x
        else:
            hi = x
        step = residual / trigamma(x)
        candidate = x - step
        if abs(residual) <= tol * scale:
            # one polishing step; Newton is already in its quadratic regime
            return candidate if candidate > 0.0 else x
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * x
        if not math.isfinite(candidate):
            raise NumericError(f"inv_digamma({y!r}) left the float range", residual=abs(residual), iterations=iteration)
        if candidate == x or (math.isfinite(hi) and hi - lo <= 4.0 * math.ulp(x)):
            return candidate
        x = candidate
    raise NumericError(f"inv_digamma({y!r}) did not converge", residual=abs(residual), iterations=max_iter)
