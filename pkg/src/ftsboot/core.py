"""Core types and L2 operations for discretely observed functional time series.

A functional sample holds n curves observed on a common grid of p points.
All inner products, norms and covariance surfaces are computed in the L2
geometry induced by trapezoidal quadrature on that grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "FunctionalSample",
    "CovSurface",
    "sample_mean",
    "center",
    "autocov",
    "hs_norm",
    "l2_inner",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


def trapezoid_weights(points: np.ndarray) -> np.ndarray:
    """Trapezoidal quadrature weights for a strictly increasing grid."""
    points = np.asarray(points, dtype=float)
    w = np.empty_like(points)
    w[0] = (points[1] - points[0]) / 2.0
    w[-1] = (points[-1] - points[-2]) / 2.0
    w[1:-1] = (points[2:] - points[:-2]) / 2.0
    return w


@dataclass(frozen=True)
class Grid:
    """Strictly increasing evaluation points with quadrature weights.

    Parameters
    ----------
    points : array_like, shape (p,)
        Strictly increasing evaluation points, p >= 2.
    quad_weights : array_like, shape (p,), optional
        Nonnegative quadrature weights. Defaults to trapezoidal weights,
        which sum to ``points[-1] - points[0]``.
    """

    points: np.ndarray
    quad_weights: np.ndarray = None

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim != 1 or points.size < 2:
            raise ValueError("grid needs at least two points")
        if not np.all(np.isfinite(points)):
            raise ValueError("grid points must be finite")
        if not np.all(np.diff(points) > 0):
            raise ValueError("grid points must be strictly increasing")
        if self.quad_weights is None:
            weights = trapezoid_weights(points)
        else:
            weights = np.asarray(self.quad_weights, dtype=float)
            if weights.shape != points.shape:
                raise ValueError("quad_weights shape does not match points")
            if not np.all(np.isfinite(weights)) or np.any(weights < 0):
                raise ValueError("quad_weights must be finite and nonnegative")
        object.__setattr__(self, "points", _readonly(points))
        object.__setattr__(self, "quad_weights", _readonly(weights))

    @classmethod
    def uniform(cls, a: float, b: float, p: int) -> "Grid":
        return cls(np.linspace(a, b, p))

    @property
    def size(self) -> int:
        return self.points.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Grid)
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.quad_weights, other.quad_weights)
        )


@dataclass(frozen=True)
class FunctionalSample:
    """n curves evaluated on a shared grid, stored as an (n, p) matrix."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d array of shape (n, p)")
        if values.shape[0] == 0:
            raise ValueError("empty sample")
        if values.shape[1] != self.grid.size:
            raise ValueError("values width does not match grid size")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", _readonly(values))

    @property
    def n_curves(self) -> int:
        return self.values.shape[0]

    @property
    def n_points(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class CovSurface:
    """A kernel surface C(u, s) evaluated on grid x grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        p = self.grid.size
        if values.shape != (p, p):
            raise ValueError("surface must be square and match the grid")
        if not np.all(np.isfinite(values)):
            raise ValueError("surface values must be finite")
        object.__setattr__(self, "values", _readonly(values))


def sample_mean(sample: FunctionalSample) -> np.ndarray:
    """Pointwise mean curve of the sample."""
    return sample.values.mean(axis=0)


def center(sample: FunctionalSample) -> FunctionalSample:
    """Subtract the sample mean curve from every curve."""
    return FunctionalSample(sample.values - sample_mean(sample), sample.grid)


def autocov(sample: FunctionalSample, lag: int) -> CovSurface:
    """Empirical autocovariance surface at a signed lag.

    For lag ``l >= 0`` this is ``(1/n) sum_{j=1}^{n-l} Xc_j(u) Xc_{j+l}(s)``
    over centered curves Xc, and the mirrored sum for negative lags. The
    divisor is n for every lag.

    Parameters
    ----------
    sample : FunctionalSample
    lag : int
        Signed lag with ``|lag| < n``.

    Returns
    -------
    CovSurface
        The (p, p) surface indexed as (u, s).
    """
    n = sample.n_curves
    if abs(lag) >= n:
        raise ValueError("lag out of range")
    xc = sample.values - sample.values.mean(axis=0)
    if lag >= 0:
        left, right = xc[: n - lag], xc[lag:]
    else:
        left, right = xc[-lag:], xc[: n + lag]
    return CovSurface(left.T @ right / n, sample.grid)


def hs_norm(surface: CovSurface) -> float:
    """Hilbert-Schmidt norm of a surface under the grid quadrature.

    Computes ``sqrt(int int C(u, s)^2 du ds)`` with the double integral
    discretized by the grid's quadrature weights in both arguments.
    """
    w = surface.grid.quad_weights
    return float(np.sqrt(np.einsum("i,j,ij->", w, w, surface.values**2)))


def l2_inner(f: np.ndarray, g: np.ndarray, grid: Grid) -> float:
    """Quadrature L2 inner product of two curves on the grid."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != (grid.size,) or g.shape != (grid.size,):
        raise ValueError("curve length does not match grid size")
    return float(np.sum(grid.quad_weights * f * g))
