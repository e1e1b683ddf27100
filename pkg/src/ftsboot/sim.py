"""Data generating processes and the Monte Carlo scoring experiment.

Samples are driven by independent standard Brownian motions on [0, 1] and
combined through functional autoregressive or moving average recursions
whose long-run covariance has the closed form ``psi**2 * min(u, s)``. The
experiment driver checks each bootstrap method's interval for the long-run
covariance estimation error against the error realized by the method's own
draws: a method scores well only when its replicates stay coherent with
the sample they came from.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from ftsboot.core import CovSurface, FunctionalSample, Grid, hs_norm
from ftsboot.lrcov import LrcovConfig, lrcov_estimate
from ftsboot.bootstrap import (
    BootstrapMethod,
    bootstrap_errors,
    bootstrap_lrcov_ensemble,
    generate_ensemble,
)

__all__ = [
    "DgpSpec",
    "ExperimentConfig",
    "ScoreCell",
    "ScoreReport",
    "brownian_path",
    "gen_dgp",
    "theoretical_lrcov",
    "interval_score",
    "run_experiment",
]

DEFAULT_GRID_SIZE = 21
DEFAULT_BURN_IN = 100


@dataclass(frozen=True)
class DgpSpec:
    """A functional autoregressive ("far") or moving average ("fma") process.

    Coefficients are the scalar lag weights of the recursion; the driving
    noise is a fresh standard Brownian motion per time index, observed on
    an equispaced grid on [0, 1].
    """

    family: str
    coefficients: tuple
    n: int
    grid_size: int = DEFAULT_GRID_SIZE
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if self.family not in ("far", "fma"):
            raise ValueError("family must be 'far' or 'fma'")
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) == 0:
            raise ValueError("need at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.grid_size < 2:
            raise ValueError("grid_size must be >= 2")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.family == "far" and sum(abs(c) for c in coeffs) >= 1.0:
            warnings.warn(
                "far coefficients with sum of absolute values >= 1 "
                "may define a nonstationary process",
                stacklevel=2,
            )

    @property
    def label(self) -> str:
        coeffs = ",".join(format(c, "g") for c in self.coefficients)
        return f"{self.family}({coeffs})"

    def grid(self) -> Grid:
        return Grid.uniform(0.0, 1.0, self.grid_size)


def brownian_path(grid: Grid, rng: np.random.Generator) -> np.ndarray:
    """One standard Brownian motion observed at the grid points.

    Increments are independent normals with variance equal to the spacing;
    the value at the first point is N(0, t_1), which is exactly zero when
    the grid starts at 0.
    """
    return _brownian_paths(grid, 1, rng)[0]


def _brownian_paths(grid: Grid, size: int, rng: np.random.Generator) -> np.ndarray:
    # One (size, p) batch of paths from a single row-major normal draw.
    t = grid.points
    dt = np.empty(t.size)
    dt[0] = t[0]
    dt[1:] = np.diff(t)
    steps = rng.standard_normal((size, t.size)) * np.sqrt(np.maximum(dt, 0.0))
    return np.cumsum(steps, axis=1)


def gen_dgp(spec: DgpSpec, seed) -> FunctionalSample:
    """Generate a sample from the process, reproducibly from the seed.

    The moving average uses exactly ``q + n`` shock paths drawn as one
    batch; row i of the sample combines shock rows by the recursion. The
    autoregression runs ``burn_in + n`` steps from zero curves and keeps
    the last n.
    """
    grid = spec.grid()
    rng = np.random.default_rng(
        seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    )
    coeffs = np.asarray(spec.coefficients)
    order = coeffs.size
    if spec.family == "fma":
        shocks = _brownian_paths(grid, order + spec.n, rng)
        values = shocks[order:].copy()
        for j in range(1, order + 1):
            values += coeffs[j - 1] * shocks[order - j : order - j + spec.n]
        return FunctionalSample(values, grid)
    total = spec.burn_in + spec.n
    shocks = _brownian_paths(grid, total, rng)
    values = np.zeros((total, grid.size))
    for i in range(total):
        acc = shocks[i].copy()
        for j in range(1, order + 1):
            if i - j >= 0:
                acc += coeffs[j - 1] * values[i - j]
        values[i] = acc
    return FunctionalSample(values[spec.burn_in :], grid)


def theoretical_lrcov(spec: DgpSpec, grid: Grid) -> CovSurface:
    """Closed-form long-run covariance ``psi**2 * min(u, s)`` of the process.

    ``psi`` is ``1 + sum(theta)`` for the moving average and
    ``1 / (1 - sum(phi))`` for the autoregression, which must not have a
    unit root.
    """
    total = sum(spec.coefficients)
    if spec.family == "far":
        if abs(1.0 - total) < 1e-8:
            raise ValueError("unit root")
        psi = 1.0 / (1.0 - total)
    else:
        psi = 1.0 + total
    t = grid.points
    return CovSurface(psi**2 * np.minimum.outer(t, t), grid)


def interval_score(lower: float, upper: float, observed: float, alpha: float) -> float:
    """Interval score of an equal-tail interval at level alpha.

    Width plus ``2 / alpha`` times the distance by which the observation
    escapes the interval. Lower scores are better; the score equals the
    width exactly when the observation is covered.
    """
    if lower > upper:
        raise ValueError("lower endpoint exceeds upper endpoint")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    score = upper - lower
    if observed < lower:
        score += 2.0 / alpha * (lower - observed)
    elif observed > upper:
        score += 2.0 / alpha * (observed - upper)
    return float(score)


@dataclass(frozen=True)
class ExperimentConfig:
    """Monte Carlo study layout: processes, methods, sizes and seeds."""

    dgps: tuple
    methods: tuple
    n_replications: int
    n_repetitions: int
    alphas: tuple = (0.05, 0.2, 0.5)
    master_seed: int = 0
    lrcov: LrcovConfig = field(default_factory=LrcovConfig)
    n_jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "dgps", tuple(self.dgps))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.dgps:
            raise ValueError("need at least one process")
        if not self.methods:
            raise ValueError("need at least one method")
        if self.n_replications < 1:
            raise ValueError("n_replications must be >= 1")
        if self.n_repetitions < 2:
            raise ValueError("n_repetitions must be >= 2")
        for a in self.alphas:
            if not 0.0 < a < 1.0:
                raise ValueError("alpha must lie in (0, 1)")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in 64 bits")


@dataclass(frozen=True)
class ScoreCell:
    """Scores of one (process, method, alpha) cell across replications."""

    dgp: str
    n: int
    method: str
    alpha: float
    scores: tuple
    failures: tuple = ()

    @property
    def mean(self) -> float:
        return float(np.mean(self.scores)) if self.scores else float("nan")


@dataclass(frozen=True)
class ScoreReport:
    """All cells of a finished experiment."""

    cells: tuple

    def get(self, dgp: str, method: str, alpha: float, n: int | None = None) -> ScoreCell:
        for cell in self.cells:
            if (
                cell.dgp == dgp
                and cell.method == method
                and np.isclose(cell.alpha, alpha)
                and (n is None or cell.n == n)
            ):
                return cell
        raise KeyError(f"no cell for ({dgp}, {method}, {alpha})")

    def mean_score(self, dgp: str, method: str, alpha: float, n: int | None = None) -> float:
        return self.get(dgp, method, alpha, n).mean


def _base_seed(master: int, dgp_idx: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=[int(master), dgp_idx, 0])


def _draw_seed(master: int, dgp_idx: int, rep: int) -> np.random.SeedSequence:
    # Every method in a replication receives this identical seed.
    return np.random.SeedSequence(entropy=[int(master), dgp_idx, rep, 1])


def _interval_seed(master: int, dgp_idx: int, rep: int) -> np.random.SeedSequence:
    # Likewise shared across methods.
    return np.random.SeedSequence(entropy=[int(master), dgp_idx, rep, 2])


def _replication_task(config: ExperimentConfig, dgp_idx: int, rep: int) -> list:
    dgp = config.dgps[dgp_idx]
    try:
        sample = gen_dgp(dgp, _base_seed(config.master_seed, dgp_idx))
        point = lrcov_estimate(sample, config.lrcov)
    except Exception as exc:
        return [("error", f"replication {rep}: {exc}")] * len(config.methods)
    out = []
    for method in config.methods:
        try:
            drawn = generate_ensemble(
                sample, method, 1, _draw_seed(config.master_seed, dgp_idx, rep)
            ).samples[0]
            drawn_surface = lrcov_estimate(drawn, config.lrcov)
            observed = hs_norm(
                CovSurface(point.values - drawn_surface.values, sample.grid)
            )
            inner = generate_ensemble(
                drawn,
                method,
                config.n_repetitions,
                _interval_seed(config.master_seed, dgp_idx, rep),
            )
            surfaces = bootstrap_lrcov_ensemble(inner, config.lrcov)
            errors = bootstrap_errors(surfaces, drawn_surface)
            scores = tuple(
                interval_score(
                    float(np.quantile(errors, a / 2.0)),
                    float(np.quantile(errors, 1.0 - a / 2.0)),
                    observed,
                    a,
                )
                for a in config.alphas
            )
            out.append(("ok", scores))
        except Exception as exc:
            out.append(("error", f"replication {rep}: {exc}"))
    return out


def run_experiment(config: ExperimentConfig) -> ScoreReport:
    """Run the full Monte Carlo scoring study.

    Each process gets one simulated base sample with its long-run
    covariance estimate. A replication then plays a complete estimation
    round inside each method's bootstrap world: the method draws a single
    bootstrapped sample, the distance between that draw's surface estimate
    and the base estimate is the realized estimation error, and a second
    round of repetitions on the drawn sample yields the equal-tail interval
    that is scored against the realized error at every alpha. Methods share
    identical sub-seeds within a replication, so score differences come
    from the resampling schemes, not from seed luck. Failures are recorded
    in their cell without stopping the rest of the study. Results do not
    depend on ``n_jobs``.
    """
    tasks = [
        (dgp_idx, rep)
        for dgp_idx in range(len(config.dgps))
        for rep in range(config.n_replications)
    ]
    if config.n_jobs == 1:
        results = [_replication_task(config, d, r) for d, r in tasks]
    else:
        results = Parallel(n_jobs=config.n_jobs)(
            delayed(_replication_task)(config, d, r) for d, r in tasks
        )
    by_task = dict(zip(tasks, results))
    cells = []
    for dgp_idx, dgp in enumerate(config.dgps):
        for mi, method in enumerate(config.methods):
            for ai, alpha in enumerate(config.alphas):
                scores, failures = [], []
                for rep in range(config.n_replications):
                    status, payload = by_task[(dgp_idx, rep)][mi]
                    if status == "ok":
                        scores.append(payload[ai])
                    else:
                        failures.append(payload)
                cells.append(
                    ScoreCell(
                        dgp=dgp.label,
                        n=dgp.n,
                        method=method.kind,
                        alpha=alpha,
                        scores=tuple(scores),
                        failures=tuple(failures),
                    )
                )
    return ScoreReport(cells=tuple(cells))
