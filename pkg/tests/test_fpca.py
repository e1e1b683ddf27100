import numpy as np
import pytest
from numpy.testing import assert_allclose

from ftsboot.core import CovSurface, FunctionalSample, Grid, autocov, center, l2_inner, sample_mean
from ftsboot.fpca import EigenDecomp, eigendecompose, project_scores, reconstruct


def gaussian_sample(n, p, seed):
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(0.0, 1.0, p)
    t = grid.points
    basis = np.stack([np.ones(p), t, np.sin(2 * np.pi * t), np.cos(2 * np.pi * t)])
    coef = rng.standard_normal((n, 4)) * np.array([1.0, 0.6, 0.3, 0.1])
    return FunctionalSample(coef @ basis + 0.05 * rng.standard_normal((n, p)), grid)


def gram_matrix(decomp):
    w = decomp.grid.quad_weights
    f = decomp.eigenfunctions
    return f @ (w[:, None] * f.T)


class TestEigendecompose:
    def test_orthonormal_eigenfunctions(self):
        x = gaussian_sample(40, 15, seed=0)
        e = eigendecompose(autocov(x, 0), n_components=10)
        assert_allclose(gram_matrix(e), np.eye(10), atol=1e-8)

    def test_eigenvalues_descending_nonnegative(self):
        x = gaussian_sample(25, 12, seed=1)
        e = eigendecompose(autocov(x, 0), n_components=12)
        assert np.all(np.diff(e.eigenvalues) <= 0)
        assert np.all(e.eigenvalues >= 0)

    def test_trace_identity(self):
        x = gaussian_sample(30, 9, seed=2)
        s = autocov(x, 0)
        e = eigendecompose(s, n_components=9)
        trace = float(np.sum(s.grid.quad_weights * np.diag(s.values)))
        assert_allclose(e.eigenvalues.sum(), trace, rtol=1e-8)

    def test_clamping_small_on_well_conditioned(self):
        x = gaussian_sample(50, 8, seed=3)
        e = eigendecompose(autocov(x, 0), n_components=8)
        assert e.clamped < 1e-8 * e.eigenvalues[0]

    def test_rank_one_surface(self):
        grid = Grid.uniform(0.0, 1.0, 21)
        f = np.sin(np.pi * grid.points)
        f = f / np.sqrt(l2_inner(f, f, grid))
        e = eigendecompose(CovSurface(np.outer(f, f), grid), n_components=3)
        assert_allclose(e.eigenvalues[0], 1.0, rtol=1e-10)
        assert_allclose(e.eigenvalues[1:], 0.0, atol=1e-10)
        # sign convention picks the orientation with nonnegative integral
        assert_allclose(np.abs(e.eigenfunctions[0]), f, atol=1e-8)
        assert float(e.eigenfunctions[0] @ grid.quad_weights) >= 0

    def test_sign_convention_deterministic(self):
        x = gaussian_sample(20, 10, seed=4)
        s = autocov(x, 0)
        e1 = eigendecompose(s, n_components=6)
        e2 = eigendecompose(s, n_components=6)
        assert np.array_equal(e1.eigenfunctions, e2.eigenfunctions)
        for k in range(6):
            integral = float(e1.eigenfunctions[k] @ s.grid.quad_weights)
            if integral == 0.0:
                first = e1.eigenfunctions[k][np.nonzero(e1.eigenfunctions[k])[0][0]]
                assert first > 0
            else:
                assert integral >= 0

    def test_rejects_asymmetric(self):
        grid = Grid.uniform(0.0, 1.0, 4)
        s = np.eye(4)
        s[0, 1] = 0.5
        with pytest.raises(ValueError, match="surface not symmetric"):
            eigendecompose(CovSurface(s, grid), n_components=2)

    def test_component_bounds(self):
        x = gaussian_sample(10, 5, seed=5)
        s = autocov(x, 0)
        with pytest.raises(ValueError, match="n_components"):
            eigendecompose(s, n_components=0)
        with pytest.raises(ValueError, match="n_components"):
            eigendecompose(s, n_components=6)


class TestScores:
    def test_score_covariance_is_diagonal(self):
        x = gaussian_sample(60, 12, seed=6)
        e = eigendecompose(autocov(x, 0), n_components=8)
        scores = project_scores(center(x), e)
        cov = scores.T @ scores / x.n_curves
        assert_allclose(cov, np.diag(e.eigenvalues[:8]), atol=1e-10 * e.eigenvalues[0])

    def test_score_columns_have_zero_mean(self):
        x = gaussian_sample(35, 10, seed=7)
        e = eigendecompose(autocov(x, 0), n_components=5)
        scores = project_scores(center(x), e)
        assert_allclose(scores.mean(axis=0), 0.0, atol=1e-12)

    def test_decorrelation_across_seeds(self):
        for seed in range(50):
            x = gaussian_sample(200, 8, seed=seed)
            e = eigendecompose(autocov(x, 0), n_components=4)
            scores = project_scores(center(x), e)
            corr = np.corrcoef(scores.T)
            off = corr[~np.eye(4, dtype=bool)]
            assert np.max(np.abs(off)) < 0.2

    def test_grid_mismatch(self):
        x = gaussian_sample(10, 6, seed=8)
        e = eigendecompose(autocov(x, 0), n_components=2)
        other = FunctionalSample(x.values[:, :5], Grid.uniform(0.0, 1.0, 5))
        with pytest.raises(ValueError, match="grids differ"):
            project_scores(other, e)


class TestReconstruct:
    def test_parseval_energy_identity(self):
        # Full-rank decomposition: sum of squared scores equals the total
        # quadrature energy of the centered sample.
        x = gaussian_sample(15, 6, seed=9)
        e = eigendecompose(autocov(x, 0), n_components=6)
        xc = center(x)
        scores = project_scores(xc, e)
        energy = float(np.sum(xc.values**2 * x.grid.quad_weights[None, :]))
        assert_allclose(np.sum(scores**2), energy, rtol=1e-8)

    def test_round_trip_on_span(self):
        x = gaussian_sample(20, 10, seed=10)
        e = eigendecompose(autocov(x, 0), n_components=10)
        scores = project_scores(center(x), e)
        rebuilt = reconstruct(sample_mean(x), e, scores)
        assert_allclose(rebuilt.values, x.values, atol=1e-8)

    def test_project_reconstruct_identity_on_scores(self):
        x = gaussian_sample(18, 7, seed=11)
        e = eigendecompose(autocov(x, 0), n_components=5)
        rng = np.random.default_rng(12)
        scores = rng.standard_normal((9, 5))
        built = reconstruct(np.zeros(7), e, scores)
        back = project_scores(built, e)
        assert_allclose(back, scores, atol=1e-8)

    def test_shape_validation(self):
        x = gaussian_sample(10, 5, seed=13)
        e = eigendecompose(autocov(x, 0), n_components=3)
        with pytest.raises(ValueError, match="mean length"):
            reconstruct(np.zeros(4), e, np.zeros((2, 3)))
        with pytest.raises(ValueError, match="scores width"):
            reconstruct(np.zeros(5), e, np.zeros((2, 4)))
