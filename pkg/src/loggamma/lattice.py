"""Sampled log-gamma environments and exact log-partition functions.

Every table lives in log-space; sums of path weights are combined with
``np.logaddexp`` and never exponentiated. Row index ``i`` runs along the
first lattice axis (the x-axis of the polymer), column index ``j`` along the
second.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .constants import MAX_DIMENSION, MAX_LATTICE_POINTS, MAX_SIDE
from .errors import UsageError
from .rates import PolymerParams

logger = logging.getLogger(__name__)

_NEG_INF = -math.inf


@dataclass(frozen=True)
class Variant:
    """I.i.d. bulk weights, or the stationary model with theta / mu - theta boundaries."""

    params: PolymerParams
    stationary: bool = False

    def __post_init__(self) -> None:
        if self.stationary:
            self.params.require_theta()

    @property
    def label(self) -> str:
        return "stationary" if self.stationary else "iid"


@dataclass(frozen=True)
class EnvironmentGrid:
    """Weights logw[i, j] = log Y_{i,j} on the rectangle 0 <= i <= m, 0 <= j <= n."""

    logw: np.ndarray
    variant: Variant
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self) -> None:
        if self.logw.ndim != 2:
            raise UsageError(f"environment must be two-dimensional, got shape {self.logw.shape}")
        if not np.all(np.isfinite(self.logw)):
            raise UsageError("environment weights must be finite")
        self.logw.setflags(write=False)

    @property
    def m(self) -> int:
        return self.logw.shape[0] - 1

    @property
    def n(self) -> int:
        return self.logw.shape[1] - 1

    def cells(self) -> Iterator[tuple[int, int, float]]:
        """Yield (i, j, logw) in row-major order, the layout of the CSV dump."""
        for i in range(self.logw.shape[0]):
            for j in range(self.logw.shape[1]):
                yield i, j, float(self.logw[i, j])


@dataclass(frozen=True)
class LogZField:
    """lz[i, j] = log Z_{(0,0),(i,j)}; with ``square`` the origin weight is included too."""

    lz: np.ndarray
    square: bool = False

    def __post_init__(self) -> None:
        self.lz.setflags(write=False)

    @property
    def corner(self) -> float:
        return float(self.lz[-1, -1])


@dataclass(frozen=True)
class DPathSpec:
    """Directed paths in Z_+^d from the origin to ``endpoint``."""

    dimension: int
    endpoint: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 2 <= self.dimension <= MAX_DIMENSION:
            raise UsageError(f"dimension must lie in [2, {MAX_DIMENSION}], got {self.dimension}")
        if len(self.endpoint) != self.dimension:
            raise UsageError(f"endpoint {self.endpoint} does not have {self.dimension} coordinates")
        if any(coord < 0 for coord in self.endpoint):
            raise UsageError(f"endpoint coordinates must be >= 0, got {self.endpoint}")
        if self.points > MAX_LATTICE_POINTS:
            raise UsageError(f"{self.points} lattice points exceed the limit of {MAX_LATTICE_POINTS}")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(coord + 1 for coord in self.endpoint)

    @property
    def points(self) -> int:
        return math.prod(self.shape)


@dataclass(frozen=True)
class BurkeRatios:
    """log U[i, j] = lz[i, j] - lz[i-1, j] and log V[i, j] = lz[i, j] - lz[i, j-1]; NaN where undefined."""

    log_u: np.ndarray
    log_v: np.ndarray


@dataclass(frozen=True)
class ExitDecomposition:
    """Split of log Z^theta_{m,n} by the first step and by the exit point from the axes."""

    log_hor: float
    log_ver: float
    log_total: float
    hor_terms: np.ndarray = field(default_factory=lambda: np.empty(0))
    ver_terms: np.ndarray = field(default_factory=lambda: np.empty(0))


# ---------------------------------------------------------------------------
# Random streams and gamma variates
# ---------------------------------------------------------------------------


def make_stream(seed: int, stream_id: int = 0, replica: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, stream, replica) triple."""
    if seed < 0 or stream_id < 0 or replica < 0:
        raise UsageError(f"seed, stream and replica must be >= 0, got ({seed}, {stream_id}, {replica})")
    sequence = np.random.SeedSequence(seed, spawn_key=(stream_id, replica))
    return np.random.Generator(np.random.PCG64(sequence))


def _check_shape(shape: float) -> None:
    if not (math.isfinite(shape) and shape > 0):
        raise UsageError(f"gamma shape must be finite and > 0, got {shape!r}")


def sample_gamma(shape: float, rng: np.random.Generator) -> float:
    """One Gamma(shape, 1) variate by Marsaglia-Tsang squeeze/acceptance."""
    _check_shape(shape)
    if shape < 1.0:
        boost = 1.0 - rng.random()
        return sample_gamma(shape + 1.0, rng) * boost ** (1.0 / shape)
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = rng.standard_normal()
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = 1.0 - rng.random()
        if u < 1.0 - 0.0331 * x**4:
            return d * v
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v


def sample_log_gamma(shape: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` values of log G with G ~ Gamma(shape), vectorised Marsaglia-Tsang.

    For shape < 1 the boost G(shape + 1) U^{1/shape} is applied in log-space,
    so tiny shapes never underflow to log 0.
    """
    _check_shape(shape)
    if size < 0:
        raise UsageError(f"sample size must be >= 0, got {size}")
    base = shape + 1.0 if shape < 1.0 else shape
    d = base - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    accepted: list[np.ndarray] = []
    remaining = size
    while remaining > 0:
        batch = int(remaining * 1.1) + 16
        x = rng.standard_normal(batch)
        u = 1.0 - rng.random(batch)
        v = 1.0 + c * x
        positive = v > 0.0
        x, u, v = x[positive], u[positive], v[positive] ** 3
        log_v = np.log(v)
        ok = (u < 1.0 - 0.0331 * x**4) | (np.log(u) < 0.5 * x * x + d * (1.0 - v + log_v))
        draws = math.log(d) + log_v[ok]
        accepted.append(draws[:remaining])
        remaining -= min(remaining, draws.size)
    values = np.concatenate(accepted) if accepted else np.empty(0)
    if shape < 1.0:
        values = values + np.log(1.0 - rng.random(size)) / shape
    return values


# ---------------------------------------------------------------------------
# Environments
# ---------------------------------------------------------------------------


def _check_rectangle(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise UsageError(f"grid sizes must be >= 0, got m={m}, n={n}")
    if max(m, n) > MAX_SIDE:
        raise UsageError(f"grid side {max(m, n)} exceeds the limit of {MAX_SIDE}")


def build_env(
    m: int,
    n: int,
    variant: Variant,
    seed: int,
    stream_id: int = 0,
    replica: int = 0,
) -> EnvironmentGrid:
    """Sample log Y on [0, m] x [0, n] with 1/Y ~ Gamma(mu) in the bulk.

    The stationary variant overrides the axes: Gamma(theta) on the x-axis,
    Gamma(mu - theta) on the y-axis, and log Y = 0 at the origin.
    """
    _check_rectangle(m, n)
    params = variant.params
    rng = make_stream(seed, stream_id, replica)
    logw = -sample_log_gamma(params.mu, (m + 1) * (n + 1), rng).reshape(m + 1, n + 1)
    if variant.stationary:
        theta = params.require_theta()
        logw[1:, 0] = -sample_log_gamma(theta, m, rng)
        logw[0, 1:] = -sample_log_gamma(params.mu - theta, n, rng)
        logw[0, 0] = 0.0
    logger.debug("built %s environment %dx%d seed=%d stream=%d replica=%d", variant.label, m, n, seed, stream_id, replica)
    return EnvironmentGrid(logw, variant, seed, stream_id)


def zero_env(m: int, n: int, variant: Variant) -> EnvironmentGrid:
    """Environment with every weight equal to one, so log Z counts paths."""
    _check_rectangle(m, n)
    return EnvironmentGrid(np.zeros((m + 1, n + 1)), variant)


# ---------------------------------------------------------------------------
# Dynamic programming
# ---------------------------------------------------------------------------


def _sweep(logw: np.ndarray, table: np.ndarray | None = None) -> float:
    """Antidiagonal sweep of lz[i, j] = logw[i, j] + logaddexp(lz[i-1, j], lz[i, j-1]).

    ``prev[i]`` holds lz on the previous antidiagonal at row i, so lz[i-1, j]
    is ``prev[i-1]`` and lz[i, j-1] is ``prev[i]``. When ``table`` is given the
    whole field is written into it.
    """
    rows, cols = logw.shape
    m, n = rows - 1, cols - 1
    prev = np.full(rows, _NEG_INF)
    prev[0] = 0.0
    if table is not None:
        table[0, 0] = 0.0
    for k in range(1, m + n + 1):
        i = np.arange(max(0, k - n), min(k, m) + 1)
        j = k - i
        up = np.where(i >= 1, prev[np.maximum(i - 1, 0)], _NEG_INF)
        left = np.where(j >= 1, prev[i], _NEG_INF)
        cur = np.full(rows, _NEG_INF)
        cur[i] = logw[i, j] + np.logaddexp(up, left)
        if table is not None:
            table[i, j] = cur[i]
        prev = cur
    return float(prev[m])


def dp_logZ(env: EnvironmentGrid, square: bool = False) -> LogZField:
    """Full table of log Z_{(0,0),(i,j)}, origin weight excluded unless ``square``."""
    table = np.empty_like(env.logw)
    _sweep(env.logw, table)
    if square:
        table += env.logw[0, 0]
    return LogZField(table, square)


def dp_corner(env: EnvironmentGrid, square: bool = False) -> float:
    """log Z_{(0,0),(m,n)} keeping a single antidiagonal in memory."""
    value = _sweep(env.logw)
    return value + float(env.logw[0, 0]) if square else value


def dp_logZ_ddim(spec: DPathSpec, logw: np.ndarray) -> float:
    """log Z from the origin to ``spec.endpoint`` in d dimensions, origin weight excluded.

    Points are processed level by level (|u|_1 = L) on the flat row-major array;
    the predecessor along axis k sits ``strides[k]`` positions earlier.
    """
    if logw.shape != spec.shape:
        raise UsageError(f"weights of shape {logw.shape} do not match endpoint shape {spec.shape}")
    flat = np.ascontiguousarray(logw, dtype=float).ravel()
    coords = np.indices(spec.shape).reshape(spec.dimension, -1)
    levels = coords.sum(axis=0)
    strides = np.array([math.prod(spec.shape[k + 1 :]) for k in range(spec.dimension)])
    lz = np.full(flat.size, _NEG_INF)
    lz[0] = 0.0
    for level in range(1, int(levels[-1]) + 1):
        idx = np.flatnonzero(levels == level)
        incoming = np.full((spec.dimension, idx.size), _NEG_INF)
        for k in range(spec.dimension):
            has = coords[k, idx] >= 1
            incoming[k, has] = lz[idx[has] - strides[k]]
        lz[idx] = flat[idx] + np.logaddexp.reduce(incoming, axis=0)
    return float(lz[-1])


def logZ_line(env: EnvironmentGrid, m: int) -> float:
    """log of the sum of Z_{(0,0),u} over the antidiagonal |u|_1 = m."""
    if m < 0:
        raise UsageError(f"line level must be >= 0, got {m}")
    if env.m < m or env.n < m:
        raise UsageError(f"environment {env.m}x{env.n} does not cover the antidiagonal at level {m}")
    table = np.empty((m + 1, m + 1))
    _sweep(env.logw[: m + 1, : m + 1], table)
    i = np.arange(m + 1)
    return float(logsumexp(table[i, m - i]))


def _require_stationary(env: EnvironmentGrid) -> None:
    if not env.variant.stationary:
        raise UsageError("this operation needs a stationary environment")


def burke_ratios(env: EnvironmentGrid, lz: LogZField | None = None) -> BurkeRatios:
    """Ratio weights of the stationary model from the full log Z field."""
    _require_stationary(env)
    table = (lz if lz is not None else dp_logZ(env)).lz
    log_u = np.full(table.shape, np.nan)
    log_v = np.full(table.shape, np.nan)
    log_u[1:, :] = table[1:, :] - table[:-1, :]
    log_v[:, 1:] = table[:, 1:] - table[:, :-1]
    return BurkeRatios(log_u, log_v)


def exit_decomposition(env: EnvironmentGrid) -> ExitDecomposition:
    """Decompose Z^theta_{m,n} by where the path leaves the axes.

    hor_terms[k-1] = sum_{i<=k} logw[i,0] + log Z^box_{(k,1),(m,n)} and
    ver_terms[l-1] likewise along the y-axis; the box partition functions
    come from one sweep over the reversed grid.
    """
    _require_stationary(env)
    m, n = env.m, env.n
    if m + n == 0:
        raise UsageError("exit decomposition needs m + n > 0")
    total = dp_corner(env)
    if n == 0:
        return ExitDecomposition(total, _NEG_INF, total)
    if m == 0:
        return ExitDecomposition(_NEG_INF, total, total)
    reversed_lz = np.empty_like(env.logw)
    _sweep(env.logw[::-1, ::-1], reversed_lz)
    # log Z^box_{(i,j),(m,n)}
    box = reversed_lz[::-1, ::-1] + env.logw[m, n]
    hor_terms = np.cumsum(env.logw[1:, 0]) + box[1:, 1]
    ver_terms = np.cumsum(env.logw[0, 1:]) + box[1, 1:]
    return ExitDecomposition(
        float(logsumexp(hor_terms)),
        float(logsumexp(ver_terms)),
        total,
        hor_terms,
        ver_terms,
    )


def sample_quenched_path(field: LogZField, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Draw a path from the quenched polymer measure by walking back from the corner."""
    lz = field.lz
    i, j = lz.shape[0] - 1, lz.shape[1] - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            up, left = lz[i - 1, j], lz[i, j - 1]
            if rng.random() < math.exp(up - np.logaddexp(up, left)):
                i -= 1
            else:
                j -= 1
        path.append((i, j))
    path.reverse()
    return path
