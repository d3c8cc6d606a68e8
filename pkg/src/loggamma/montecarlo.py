"""Replica experiments confronting simulated lattices with the closed forms."""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TypeVar

import numpy as np
from scipy import stats
from scipy.special import gammainc, logsumexp

from .constants import ESS_THRESHOLD, INF, KS_MIN_SAMPLES, TAIL_Z
from .errors import UsageError
from .lattice import EnvironmentGrid, Variant, build_env, burke_ratios, dp_corner, dp_logZ
from .rates import (
    Direction,
    PolymerParams,
    characteristic_direction,
    free_energy_pp,
    lambda_iid,
    lambda_stationary,
    rate_J,
)
from .specfun import digamma
from .utils import parse_bool, parse_float_list, parse_int_list, read_plan_file

logger = logging.getLogger(__name__)

T = TypeVar("T")

ESTIMATORS = ("mean", "lln", "lmgf", "tail", "burke", "variance")

# Stream offset separating the off-characteristic direction from the characteristic one
_OFF_STREAM = 1 << 20
# Stream offset of the i.i.d. control grid in the Burke test
_CONTROL_STREAM = 1 << 21


@dataclass(frozen=True)
class ExperimentPlan:
    """Everything a replica experiment needs; sizes n map to endpoints (ns, nt)."""

    params: PolymerParams
    direction: Direction = Direction(1.0, 1.0)
    sizes: tuple[int, ...] = (32,)
    replicas: int = 100
    seed: int = 0
    stationary: bool = False
    estimator: str = "mean"
    xi: float | None = None
    r: float | None = None
    seeds: tuple[int, ...] = ()
    workers: int = 1
    out: str | None = None

    def __post_init__(self) -> None:
        if self.replicas < 1:
            raise UsageError(f"replicas must be >= 1, got {self.replicas}")
        if not self.sizes or any(size < 0 for size in self.sizes):
            raise UsageError(f"sizes must be a non-empty list of integers >= 0, got {self.sizes}")
        if self.seed < 0 or any(seed < 0 for seed in self.seeds):
            raise UsageError("seeds must be >= 0")
        if self.workers < 1:
            raise UsageError(f"workers must be >= 1, got {self.workers}")
        if self.estimator not in ESTIMATORS:
            raise UsageError(f"unknown estimator {self.estimator!r}; choose from {', '.join(ESTIMATORS)}")
        if self.stationary:
            self.params.require_theta()

    @property
    def variant(self) -> Variant:
        return Variant(self.params, self.stationary)

    def endpoint(self, size: int, direction: Direction | None = None) -> tuple[int, int]:
        d = direction or self.direction
        return math.floor(size * d.s + 1e-9), math.floor(size * d.t + 1e-9)

    def replace(self, **overrides: Any) -> ExperimentPlan:
        """Copy with the given fields replaced; ``None`` values leave a field alone."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SampleStats:
    count: int
    mean: float
    variance: float
    stderr: float

    @classmethod
    def from_values(cls, values: Sequence[float]) -> SampleStats:
        """Mean and unbiased variance by compensated summation of sorted terms."""
        data = sorted(float(value) for value in values)
        count = len(data)
        if count == 0:
            raise UsageError("cannot summarise an empty sample")
        mean = math.fsum(data) / count
        if count < 2:
            return cls(count, mean, 0.0, 0.0)
        variance = math.fsum(sorted((value - mean) ** 2 for value in data)) / (count - 1)
        return cls(count, mean, variance, math.sqrt(variance / count))

    def as_record(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class TestReport:
    """Outcome of one check. Checks without a sampling distribution report p_value 1 or 0."""

    __test__ = False

    name: str
    statistic: float
    p_value: float
    passed: bool
    level: float | None = None
    metadata: dict = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value must lie in [0, 1], got {self.p_value!r}")

    def as_record(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "passed": self.passed,
            "level": self.level,
            "metadata": self.metadata,
            "rows": self.rows,
        }


@dataclass(frozen=True)
class TailEstimate:
    """Empirical -n^{-1} log P{log Z >= n r} with Wilson bounds; lower/upper bound the rate."""

    size: int
    count: int
    hits: int
    estimate: float
    lower: float
    upper: float
    rate: float

    def as_record(self) -> dict:
        return dataclasses.asdict(self)


def load_plan(path: str | Path) -> ExperimentPlan:
    """Read an ExperimentPlan from a flat key = value file."""
    entries = read_plan_file(path)
    allowed = {
        "mu", "theta", "s", "t", "sizes", "replicas", "seed",
        "estimator", "stationary", "xi", "r", "seeds", "workers", "out",
    }
    unknown = sorted(set(entries) - allowed)
    if unknown:
        raise UsageError(f"unknown plan keys: {', '.join(unknown)}")
    if "mu" not in entries:
        raise UsageError("plan needs a 'mu' entry")

    def number(key: str) -> float | None:
        if key not in entries:
            return None
        values = parse_float_list(entries[key], key)
        if len(values) != 1:
            raise UsageError(f"{key}: expected a single number")
        return values[0]

    def integer(key: str) -> int | None:
        if key not in entries:
            return None
        values = parse_int_list(entries[key], key)
        if len(values) != 1:
            raise UsageError(f"{key}: expected a single integer")
        return values[0]

    theta = number("theta")
    params = PolymerParams(number("mu"), theta)  # type: ignore[arg-type]
    s, t = number("s"), number("t")
    plan = ExperimentPlan(params)
    return plan.replace(
        direction=Direction(s if s is not None else 1.0, t if t is not None else 1.0),
        sizes=tuple(parse_int_list(entries["sizes"], "sizes")) if "sizes" in entries else None,
        replicas=integer("replicas"),
        seed=integer("seed"),
        estimator=entries.get("estimator"),
        stationary=parse_bool(entries["stationary"], "stationary") if "stationary" in entries else None,
        xi=number("xi"),
        r=number("r"),
        seeds=tuple(parse_int_list(entries["seeds"], "seeds")) if "seeds" in entries else None,
        workers=integer("workers"),
        out=entries.get("out"),
    )


def run_replicas(task: Callable[[int], T], replicas: int, workers: int = 1) -> list[T]:
    """Run task(0), ..., task(replicas - 1); results are ordered by replica index."""
    if workers <= 1 or replicas <= 1:
        return [task(replica) for replica in range(replicas)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(replicas)))


def sample_logZ(
    plan: ExperimentPlan,
    size: int,
    direction: Direction | None = None,
    stream_id: int | None = None,
) -> np.ndarray:
    """log Z at the endpoint of ``size`` for every replica of the plan."""
    m, n = plan.endpoint(size, direction)
    stream = size if stream_id is None else stream_id
    variant = plan.variant

    def one(replica: int) -> float:
        return dp_corner(build_env(m, n, variant, plan.seed, stream, replica))

    values = np.array(run_replicas(one, plan.replicas, plan.workers))
    logger.info("size %d -> endpoint (%d, %d): %d replicas done", size, m, n, plan.replicas)
    return values


def exact_mean_logZ(params: PolymerParams, m: int, n: int) -> float:
    """E log Z^theta_{m,n} = -m Psi0(theta) - n Psi0(mu - theta)."""
    theta = params.require_theta()
    return -m * digamma(theta) - n * digamma(params.mu - theta)


def ks_gamma(samples: Sequence[float] | np.ndarray, shape: float) -> tuple[float, float]:
    """Two-sided Kolmogorov-Smirnov distance to the Gamma(shape) CDF and its asymptotic p-value."""
    x = np.sort(np.asarray(samples, dtype=float))
    count = x.size
    if count < KS_MIN_SAMPLES:
        raise UsageError(f"KS test needs at least {KS_MIN_SAMPLES} samples, got {count}")
    cdf = gammainc(shape, x)
    ranks = np.arange(1, count + 1)
    d_plus = np.max(ranks / count - cdf)
    d_minus = np.max(cdf - (ranks - 1) / count)
    statistic = float(max(d_plus, d_minus))
    p_value = float(np.clip(stats.kstwobign.sf(math.sqrt(count) * statistic), 0.0, 1.0))
    return statistic, p_value


def lag1_autocorrelation(values: Sequence[float] | np.ndarray) -> float:
    x = np.asarray(values, dtype=float)
    centred = x - x.mean()
    denom = float(np.dot(centred, centred))
    if denom == 0.0:
        return 0.0
    return float(np.dot(centred[:-1], centred[1:]) / denom)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def mc_mean_logZ(plan: ExperimentPlan, size: int | None = None) -> SampleStats:
    """Replica mean and standard error of log Z at the endpoint of ``size``."""
    size = plan.sizes[0] if size is None else size
    return SampleStats.from_values(sample_logZ(plan, size))


def mean_identity_test(plan: ExperimentPlan, max_z: float = 4.0) -> TestReport:
    """Stationary sample means of log Z against -m Psi0(theta) - n Psi0(mu - theta)."""
    if not plan.stationary:
        raise UsageError("the mean identity holds for the stationary model only")
    rows = []
    worst = 0.0
    for size in plan.sizes:
        m, n = plan.endpoint(size)
        summary = mc_mean_logZ(plan, size)
        exact = exact_mean_logZ(plan.params, m, n)
        diff = summary.mean - exact
        if summary.stderr > 0:
            z = diff / summary.stderr
        else:
            z = 0.0 if abs(diff) <= 1e-12 else INF
        worst = max(worst, abs(z))
        rows.append({"n": size, "m_rows": m, "n_cols": n, "mean": summary.mean,
                     "stderr": summary.stderr, "exact": exact, "z": z})
    p_value = float(min(1.0, 2.0 * stats.norm.sf(worst))) if math.isfinite(worst) else 0.0
    return TestReport(
        "mean-identity", worst, p_value, worst <= max_z, level=max_z,
        metadata={"seed": plan.seed, "replicas": plan.replicas, "sizes": list(plan.sizes)},
        rows=rows,
    )


def mc_lln_gap(plan: ExperimentPlan) -> list[dict]:
    """Rows (n, mean log Z / n, its SE, reference, gap) over the plan sizes.

    The i.i.d. reference is the limit p_mu(s, t); the stationary one is the
    exact finite-n mean divided by n.
    """
    rows = []
    for size in plan.sizes:
        if size <= 0:
            raise UsageError("LLN sizes must be > 0")
        m, n = plan.endpoint(size)
        summary = SampleStats.from_values(sample_logZ(plan, size) / size)
        if plan.stationary:
            reference = exact_mean_logZ(plan.params, m, n) / size
        else:
            reference = free_energy_pp(plan.params, plan.direction).value
        rows.append({"n": size, "estimate": summary.mean, "stderr": summary.stderr,
                     "reference": reference, "gap": summary.mean - reference})
    return rows


def lln_test(plan: ExperimentPlan, tol: float = 0.05, max_z: float = 3.0) -> TestReport:
    """Last gap within ``tol`` of zero and gaps ordered (superadditive) within max_z SE."""
    rows = mc_lln_gap(plan)
    last = rows[-1]
    ok = abs(last["gap"]) < tol
    for small, large in zip(rows, rows[1:]):
        slack = max_z * math.hypot(small["stderr"], large["stderr"])
        ok = ok and small["gap"] <= large["gap"] + slack
    ok = ok and last["gap"] <= max_z * last["stderr"]
    return TestReport(
        "lln", abs(last["gap"]), 1.0 if ok else 0.0, ok, level=tol,
        metadata={"seed": plan.seed, "replicas": plan.replicas, "variant": plan.variant.label},
        rows=rows,
    )


def burke_ks_test(plan: ExperimentPlan, control: bool = False) -> TestReport:
    """KS and lag-1 checks of the ratio weights on the top row and right column.

    1/U_{i,n} should be Gamma(theta) and 1/V_{m,j} Gamma(mu - theta), each
    sequence without serial correlation. Passes when the median p-values exceed
    0.05, at least 85% of seeds have p > 0.01 and at least 85% keep the lag-1
    autocorrelation within 3/sqrt(m). With ``control`` the same KS statistic is
    reported for an i.i.d. grid, for comparison only.
    """
    if not plan.stationary:
        raise UsageError("the Burke test needs the stationary model")
    size = plan.sizes[0]
    m, n = plan.endpoint(size)
    if min(m, n) < KS_MIN_SAMPLES:
        raise UsageError(f"the Burke test needs at least {KS_MIN_SAMPLES} rows and columns, got {m}x{n}")
    theta = plan.params.require_theta()
    mu = plan.params.mu
    seeds = plan.seeds or (plan.seed,)
    band = 3.0 / math.sqrt(m)

    def one(k: int) -> dict:
        env = build_env(m, n, plan.variant, seeds[k], stream_id=size)
        ratios = burke_ratios(env)
        log_u = ratios.log_u[1:, n]
        log_v = ratios.log_v[m, 1:]
        d_u, p_u = ks_gamma(np.exp(-log_u), theta)
        d_v, p_v = ks_gamma(np.exp(-log_v), mu - theta)
        row = {"seed": seeds[k], "ks_u": d_u, "p_u": p_u, "ks_v": d_v, "p_v": p_v,
               "autocorr_u": lag1_autocorrelation(log_u)}
        if control:
            iid_u = _top_row_ratios(control_env(plan, seeds[k], size))
            row["control_p"] = ks_gamma(np.exp(-iid_u), theta)[1]
        return row

    rows = run_replicas(one, len(seeds), plan.workers)
    p_u = np.array([row["p_u"] for row in rows])
    p_v = np.array([row["p_v"] for row in rows])
    autocorr_ok = np.array([abs(row["autocorr_u"]) <= band for row in rows])
    median_u, median_v = float(np.median(p_u)), float(np.median(p_v))
    passed = (
        median_u > 0.05 and median_v > 0.05
        and np.mean(p_u > 0.01) >= 0.85 and np.mean(p_v > 0.01) >= 0.85
        and np.mean(autocorr_ok) >= 0.85
    )
    return TestReport(
        "burke", float(np.median([row["ks_u"] for row in rows])), min(median_u, median_v), bool(passed),
        level=0.05,
        metadata={"size": size, "m": m, "n": n, "seeds": list(seeds), "autocorr_band": band},
        rows=rows,
    )


def control_env(plan: ExperimentPlan, seed: int, size: int) -> EnvironmentGrid:
    """The i.i.d. grid compared against the stationary one; drawn from its own stream."""
    m, n = plan.endpoint(size)
    return build_env(m, n, Variant(plan.params), seed, stream_id=size + _CONTROL_STREAM)


def _top_row_ratios(env: EnvironmentGrid) -> np.ndarray:
    """log Z_{(i,n)} - log Z_{(i-1,n)} along the top row of any environment."""
    lz = dp_logZ(env).lz
    return lz[1:, -1] - lz[:-1, -1]


def mc_lmgf(plan: ExperimentPlan, xi: float) -> list[dict]:
    """Rows (n, n^{-1} log mean exp(xi log Z), ESS, reference) over the plan sizes."""
    mu = plan.params.mu
    if not 0.0 <= xi <= 0.25 * mu:
        raise UsageError(f"xi must lie in [0, mu/4] = [0, {0.25 * mu!r}], got {xi!r}")
    if plan.stationary:
        reference = lambda_stationary(plan.params, plan.direction, xi)
    else:
        reference = lambda_iid(plan.params, plan.direction, xi).value
    rows = []
    for size in plan.sizes:
        if size <= 0:
            raise UsageError("l.m.g.f. sizes must be > 0")
        if xi == 0.0:
            rows.append({"n": size, "estimate": 0.0, "ess": float(plan.replicas),
                         "low_ess": False, "reference": reference})
            continue
        scaled = xi * sample_logZ(plan, size)
        total = float(logsumexp(scaled))
        weights = np.exp(scaled - total)
        ess = float(1.0 / np.sum(weights**2))
        low = ess < ESS_THRESHOLD
        if low:
            logger.warning("effective sample size %.1f below %d at n=%d", ess, ESS_THRESHOLD, size)
        estimate = (total - math.log(scaled.size)) / size
        rows.append({"n": size, "estimate": estimate, "ess": ess, "low_ess": low, "reference": reference})
    return rows


def _fit_exponent(sizes: Sequence[int], variances: Sequence[float]) -> tuple[float, float]:
    fit = stats.linregress(np.log(np.asarray(sizes, dtype=float)), np.log(np.asarray(variances, dtype=float)))
    return float(fit.slope), float(fit.stderr)


def variance_exponent_scan(
    plan: ExperimentPlan,
    off_direction: Direction | None = None,
    char_band: tuple[float, float] = (0.5, 0.85),
    off_band: tuple[float, float] = (0.85, 1.15),
) -> TestReport:
    """Slope of log Var(log Z) against log n on and off the characteristic direction."""
    if not plan.stationary:
        raise UsageError("the variance scan needs the stationary model")
    if len(plan.sizes) < 3:
        raise UsageError("the variance scan needs at least three sizes")
    params = plan.params
    theta = params.require_theta()
    raw = characteristic_direction(params)
    char = characteristic_direction(params, 2.0 / (raw.s + raw.t))
    off = off_direction or Direction(1.5, 0.5)
    rows = []
    slopes = {}
    for label, direction, offset in (("characteristic", char, 0), ("off", off, _OFF_STREAM)):
        variances = []
        for size in plan.sizes:
            summary = SampleStats.from_values(sample_logZ(plan, size, direction, size + offset))
            variances.append(summary.variance)
            rows.append({"direction": label, "n": size, "variance": summary.variance})
        slopes[label] = _fit_exponent(plan.sizes, variances)
    (slope_c, se_c), (slope_o, se_o) = slopes["characteristic"], slopes["off"]
    spread = math.hypot(se_c, se_o)
    if spread > 0 and math.isfinite(spread):
        p_value = float(stats.norm.sf((slope_o - slope_c) / spread))
    else:
        p_value = 0.0 if slope_c < slope_o else 1.0
    passed = (
        char_band[0] <= slope_c <= char_band[1]
        and off_band[0] <= slope_o <= off_band[1]
        and slope_c < slope_o
    )
    return TestReport(
        "variance-scan", slope_o - slope_c, p_value, passed,
        metadata={
            "theta": theta, "slope_characteristic": slope_c, "stderr_characteristic": se_c,
            "slope_off": slope_o, "stderr_off": se_o,
            "direction_characteristic": [char.s, char.t], "direction_off": [off.s, off.t],
            "seed": plan.seed, "replicas": plan.replicas,
        },
        rows=rows,
    )


def _wilson(hits: int, count: int, z: float = TAIL_Z) -> tuple[float, float]:
    p_hat = hits / count
    denom = 1.0 + z * z / count
    centre = (p_hat + z * z / (2.0 * count)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / count + z * z / (4.0 * count * count)) / denom
    lower = 0.0 if hits == 0 else max(0.0, centre - half)
    upper = 1.0 if hits == count else min(1.0, centre + half)
    return lower, upper


def _neg_log_rate(prob: float, size: int) -> float:
    return INF if prob <= 0.0 else max(0.0, -math.log(prob) / size)


def right_tail_estimate(plan: ExperimentPlan, r: float, size: int | None = None) -> TailEstimate:
    """Empirical right-tail rate of log Z at level n r, reported next to rate_J."""
    if plan.stationary:
        raise UsageError("right-tail estimates use the i.i.d. model")
    size = plan.sizes[0] if size is None else size
    if size <= 0:
        raise UsageError("tail sizes must be > 0")
    values = sample_logZ(plan, size)
    hits = int(np.count_nonzero(values >= size * r))
    count = values.size
    lower, upper = _wilson(hits, count)
    if hits == 0:
        logger.warning("no replica reached level n r = %g; only a lower bound is available", size * r)
    return TailEstimate(
        size=size,
        count=count,
        hits=hits,
        estimate=_neg_log_rate(hits / count, size),
        lower=_neg_log_rate(upper, size),
        upper=_neg_log_rate(lower, size),
        rate=rate_J(plan.params, plan.direction, r),
    )


def run_plan(plan: ExperimentPlan) -> list[dict]:
    """Run the estimator a plan names and return its output records.

    ``lmgf`` reads ``plan.xi`` and ``tail`` reads ``plan.r``; the two
    acceptance estimators (``burke``, ``variance``) return their report as a
    single record.
    """
    logger.info("running %s on sizes %s (%d replicas)", plan.estimator, list(plan.sizes), plan.replicas)
    if plan.estimator == "mean":
        records = []
        for size in plan.sizes:
            m, n = plan.endpoint(size)
            summary = mc_mean_logZ(plan, size)
            records.append({"n": size, "m_rows": m, "n_cols": n, **summary.as_record()})
        return records
    if plan.estimator == "lln":
        return mc_lln_gap(plan)
    if plan.estimator == "lmgf":
        if plan.xi is None:
            raise UsageError("the lmgf estimator needs xi")
        return mc_lmgf(plan, plan.xi)
    if plan.estimator == "tail":
        if plan.r is None:
            raise UsageError("the tail estimator needs r")
        return [right_tail_estimate(plan, plan.r, size).as_record() for size in plan.sizes]
    if plan.estimator == "burke":
        return [burke_ks_test(plan).as_record()]
    return [variance_exponent_scan(plan).as_record()]
