"""Bootstrap schemes for stationary functional time series.

Four ways to regenerate a functional sample: independent resampling of
principal component scores, maximum entropy bootstrap of the scores, and
two residual-based schemes built on a fitted first-order autoregression
or a nonparametric kernel regression on the previous curve. Helpers then
turn replicate ensembles into long-run covariance ensembles and bootstrap
confidence statements.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ftsboot.core import (
    CovSurface,
    FunctionalSample,
    Grid,
    autocov,
    center,
    hs_norm,
    sample_mean,
)
from ftsboot.fpca import eigendecompose, project_scores
from ftsboot.lrcov import LrcovConfig, lrcov_estimate
from ftsboot.meboot import MebootSpec, meboot_ensemble

__all__ = [
    "BootstrapMethod",
    "BootstrapEnsemble",
    "Far1Fit",
    "iid_bootstrap",
    "me_score_bootstrap",
    "far1_fit",
    "far1_residuals",
    "far_bootstrap",
    "fkr_bandwidth",
    "fkr_predict",
    "fkr_bootstrap",
    "generate_ensemble",
    "bootstrap_lrcov_ensemble",
    "bootstrap_errors",
    "error_ci",
    "surface_ci",
]

METHOD_KINDS = ("iid", "me_score", "far1", "fkr")


@dataclass(frozen=True)
class BootstrapMethod:
    """Which bootstrap scheme to run and its tuning constants."""

    kind: str
    meboot_spec: MebootSpec = field(default_factory=MebootSpec)
    far_regularization: float = 0.85
    fkr_bandwidth_rule: float = 0.2

    def __post_init__(self):
        if self.kind not in METHOD_KINDS:
            raise ValueError(f"kind must be one of {METHOD_KINDS}")
        if not 0.0 < self.far_regularization <= 1.0:
            raise ValueError("far_regularization must lie in (0, 1]")
        if not 0.0 < self.fkr_bandwidth_rule < 1.0:
            raise ValueError("fkr_bandwidth_rule must lie in (0, 1)")


@dataclass(frozen=True)
class BootstrapEnsemble:
    """B replicates (functional samples or covariance surfaces) plus provenance."""

    samples: tuple
    method: str
    seed: object = None

    @property
    def size(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class Far1Fit:
    """Fitted first-order functional autoregression.

    ``rho`` is the operator kernel R(s, t) on grid x grid; it acts on a
    curve f by integrating over the first argument,
    ``(rho f)(t) = int R(s, t) f(s) ds``.
    """

    rho: np.ndarray
    mean: np.ndarray
    grid: Grid
    n_components: int

    def apply(self, curves: np.ndarray) -> np.ndarray:
        """Apply the operator to one curve or a stack of curves (rows)."""
        action = self.grid.quad_weights[:, None] * self.rho
        return np.asarray(curves, dtype=float) @ action


def _seed_seq(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _score_basis(sample: FunctionalSample):
    n, p = sample.values.shape
    k = min(n - 1, p)
    decomp = eigendecompose(autocov(sample, 0), k)
    scores = project_scores(center(sample), decomp)
    return decomp, scores


def _me_functional_replicates(
    sample: FunctionalSample, n_replicates: int, spec: MebootSpec, ss
) -> np.ndarray:
    # Maximum entropy bootstrap of a functional sample: bootstrap each
    # principal component score column, then rebuild curves around the
    # sample mean. Returns a (B, n, p) stack of replicate value matrices.
    decomp, scores = _score_basis(sample)
    mu = sample_mean(sample)
    col_spec = replace(spec, n_replicates=n_replicates)
    k = scores.shape[1]
    boot = np.empty((n_replicates, sample.n_curves, k))
    for col, child in enumerate(ss.spawn(k)):
        boot[:, :, col] = meboot_ensemble(scores[:, col], col_spec, child)
    return mu + boot @ decomp.eigenfunctions


def iid_bootstrap(sample: FunctionalSample, n_replicates: int, seed) -> BootstrapEnsemble:
    """Bootstrap by resampling each score column independently with replacement.

    Serial dependence and cross-component coupling are both destroyed on
    purpose; this is the naive comparison baseline.
    """
    decomp, scores = _score_basis(sample)
    mu = sample_mean(sample)
    n, k = scores.shape
    out = []
    for child in _seed_seq(seed).spawn(n_replicates):
        rng = np.random.default_rng(child)
        drawn = np.empty_like(scores)
        for col in range(k):
            drawn[:, col] = scores[rng.integers(0, n, size=n), col]
        out.append(FunctionalSample(mu + drawn @ decomp.eigenfunctions, sample.grid))
    return BootstrapEnsemble(tuple(out), method="iid", seed=seed)


def me_score_bootstrap(
    sample: FunctionalSample, n_replicates: int, spec: MebootSpec, seed
) -> BootstrapEnsemble:
    """Maximum entropy bootstrap applied to each score column.

    Rank orderings within every column are preserved, so the temporal
    dependence carried by the scores survives into the replicates.
    """
    values = _me_functional_replicates(sample, n_replicates, spec, _seed_seq(seed))
    out = tuple(FunctionalSample(v, sample.grid) for v in values)
    return BootstrapEnsemble(out, method="me_score", seed=seed)


def far1_fit(sample: FunctionalSample, regularization_ratio: float = 0.85) -> Far1Fit:
    """Fit a first-order functional autoregression by Yule-Walker inversion.

    The lag-1 autocovariance is composed with a truncated-eigenbasis
    pseudo-inverse of the lag-0 autocovariance; components are retained up
    to the smallest set whose eigenvalue sum reaches the regularization
    ratio of the total.

    Parameters
    ----------
    sample : FunctionalSample
        At least three curves.
    regularization_ratio : float
        Cumulative eigenvalue ratio in (0, 1].

    Returns
    -------
    Far1Fit
    """
    if sample.n_curves < 3:
        raise ValueError("need at least three curves")
    if not 0.0 < regularization_ratio <= 1.0:
        raise ValueError("regularization_ratio must lie in (0, 1]")
    grid = sample.grid
    w = grid.quad_weights
    mu = sample_mean(sample)
    decomp = eigendecompose(autocov(sample, 0), grid.size)
    lam = decomp.eigenvalues
    if lam[0] <= 0.0:
        raise ValueError("degenerate covariance")
    cum = np.cumsum(lam)
    k = int(np.searchsorted(cum, regularization_ratio * cum[-1]) + 1)
    k = min(k, int(np.sum(lam > 1e-12 * lam[0])))
    k = max(k, 1)
    lam_k = lam[:k]
    phi = decomp.eigenfunctions[:k]
    g1 = autocov(sample, 1).values
    rho = phi.T @ ((phi @ (w[:, None] * g1)) / lam_k[:, None])
    return Far1Fit(rho=rho, mean=mu, grid=grid, n_components=k)


def far1_residuals(sample: FunctionalSample, fit: Far1Fit) -> FunctionalSample:
    """Centered one-step-ahead residual curves of the fitted autoregression."""
    raw = _far1_raw_residuals(sample, fit)
    return FunctionalSample(raw - raw.mean(axis=0), sample.grid)


def _far1_raw_residuals(sample: FunctionalSample, fit: Far1Fit) -> np.ndarray:
    xc = sample.values - fit.mean
    return xc[1:] - fit.apply(xc[:-1])


def far_bootstrap(
    sample: FunctionalSample,
    n_replicates: int,
    spec: MebootSpec,
    seed,
    regularization_ratio: float = 0.85,
) -> BootstrapEnsemble:
    """Residual bootstrap of a first-order functional autoregression.

    The raw residual sample is itself bootstrapped with the score-level
    maximum entropy machinery (its mean rides along through the score
    reconstruction). Replicates are assembled non-recursively, like the
    kernel-regression bootstrap: the observed first curve is kept and every
    later curve is the one-step fit from its observed predecessor plus a
    bootstrapped residual. Feeding the fits back into themselves instead
    would let fitting error compound through the recursion and inflate the
    replicate spread well beyond the residual scale.
    """
    fit = far1_fit(sample, regularization_ratio)
    raw = _far1_raw_residuals(sample, fit)
    resid_sample = FunctionalSample(raw, sample.grid)
    eps = _me_functional_replicates(resid_sample, n_replicates, spec, _seed_seq(seed))
    n = sample.n_curves
    fitted = fit.mean + fit.apply(sample.values[:-1] - fit.mean)
    values = np.empty((n_replicates, n, sample.n_points))
    values[:, 0, :] = sample.values[0]
    values[:, 1:, :] = fitted[None, :, :] + eps
    out = tuple(FunctionalSample(v, sample.grid) for v in values)
    return BootstrapEnsemble(out, method="far1", seed=seed)


def _predictor_distances(sample: FunctionalSample) -> np.ndarray:
    # Quadrature L2 distances among the n-1 predictor curves.
    g = sample.values[:-1]
    w = sample.grid.quad_weights
    gw = g * w[None, :]
    sq = np.sum(gw * g, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (gw @ g.T)
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(np.maximum(d2, 0.0))


def fkr_bandwidth(sample: FunctionalSample, bandwidth_rule: float = 0.2) -> float:
    """Bandwidth for the kernel regression: a quantile of the pairwise
    predictor distances."""
    d = _predictor_distances(sample)
    iu = np.triu_indices(d.shape[0], k=1)
    return float(np.quantile(d[iu], bandwidth_rule))


def fkr_predict(
    sample: FunctionalSample, bandwidth_rule: float = 0.2
) -> FunctionalSample:
    """Leave-one-out kernel regression fits of each curve on its predecessor.

    Uses the quadratic kernel ``K(x) = 1 - x**2`` on [0, 1] with the
    quadrature L2 distance. Responses sharing the target's pair index are
    excluded; if every kernel weight vanishes the nearest predictor's
    response is used instead.

    Returns the n - 1 fitted curves for targets 2..n.
    """
    n = sample.n_curves
    if n < 3:
        raise ValueError("need at least three curves")
    d = _predictor_distances(sample)
    iu = np.triu_indices(n - 1, k=1)
    h = float(np.quantile(d[iu], bandwidth_rule))
    responses = sample.values[1:]
    if h > 0.0:
        u = d / h
        wgt = np.where(u < 1.0, 1.0 - u**2, 0.0)
    else:
        wgt = np.zeros_like(d)
    np.fill_diagonal(wgt, 0.0)
    totals = wgt.sum(axis=1)
    fits = np.empty_like(responses)
    ok = totals > 0.0
    if np.any(ok):
        fits[ok] = (wgt[ok] @ responses) / totals[ok, None]
    if not np.all(ok):
        d_loo = d.copy()
        np.fill_diagonal(d_loo, np.inf)
        nearest = np.argmin(d_loo, axis=1)
        bad = ~ok
        fits[bad] = responses[nearest[bad]]
    return FunctionalSample(fits, sample.grid)


def fkr_bootstrap(
    sample: FunctionalSample,
    n_replicates: int,
    spec: MebootSpec,
    seed,
    bandwidth_rule: float = 0.2,
) -> BootstrapEnsemble:
    """Residual bootstrap of the functional kernel regression.

    Replicates are assembled non-recursively as fitted value plus
    bootstrapped residual, keeping the observed first curve.
    """
    fits = fkr_predict(sample, bandwidth_rule).values
    raw = sample.values[1:] - fits
    resid_sample = FunctionalSample(raw, sample.grid)
    eps = _me_functional_replicates(resid_sample, n_replicates, spec, _seed_seq(seed))
    n = sample.n_curves
    values = np.empty((n_replicates, n, sample.n_points))
    values[:, 0, :] = sample.values[0]
    values[:, 1:, :] = fits + eps
    out = tuple(FunctionalSample(v, sample.grid) for v in values)
    return BootstrapEnsemble(out, method="fkr", seed=seed)


def generate_ensemble(
    sample: FunctionalSample, method: BootstrapMethod, n_replicates: int, seed
) -> BootstrapEnsemble:
    """Dispatch to the configured bootstrap scheme."""
    if method.kind == "iid":
        return iid_bootstrap(sample, n_replicates, seed)
    if method.kind == "me_score":
        return me_score_bootstrap(sample, n_replicates, method.meboot_spec, seed)
    if method.kind == "far1":
        return far_bootstrap(
            sample, n_replicates, method.meboot_spec, seed, method.far_regularization
        )
    return fkr_bootstrap(
        sample, n_replicates, method.meboot_spec, seed, method.fkr_bandwidth_rule
    )


def bootstrap_lrcov_ensemble(
    ensemble: BootstrapEnsemble, config: LrcovConfig = LrcovConfig()
) -> BootstrapEnsemble:
    """Long-run covariance estimate of every replicate sample.

    With ``bandwidth="plugin"`` the plug-in bandwidth is recomputed on each
    replicate rather than frozen at the original sample's value.
    """
    surfaces = tuple(lrcov_estimate(s, config) for s in ensemble.samples)
    return BootstrapEnsemble(surfaces, method=ensemble.method, seed=ensemble.seed)


def bootstrap_errors(ensemble: BootstrapEnsemble, point: CovSurface) -> np.ndarray:
    """Hilbert-Schmidt distances between the point estimate and each
    replicate surface."""
    return np.array(
        [
            hs_norm(CovSurface(point.values - s.values, point.grid))
            for s in ensemble.samples
        ]
    )


def error_ci(
    ensemble: BootstrapEnsemble, point: CovSurface, alpha: float
) -> tuple[float, float]:
    """Equal-tail bootstrap interval for the estimation error norm.

    Returns the empirical ``alpha/2`` and ``1 - alpha/2`` quantiles (linear
    interpolation of order statistics) of the replicate error norms.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    d = bootstrap_errors(ensemble, point)
    return (
        float(np.quantile(d, alpha / 2.0)),
        float(np.quantile(d, 1.0 - alpha / 2.0)),
    )


def surface_ci(
    ensemble: BootstrapEnsemble, level: float
) -> tuple[CovSurface, CovSurface]:
    """Pointwise equal-tail envelope surfaces at the given coverage level."""
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    stack = np.stack([s.values for s in ensemble.samples])
    lo = np.quantile(stack, (1.0 - level) / 2.0, axis=0)
    hi = np.quantile(stack, (1.0 + level) / 2.0, axis=0)
    grid = ensemble.samples[0].grid
    return CovSurface(lo, grid), CovSurface(hi, grid)
