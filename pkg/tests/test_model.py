import numpy as np
import pytest
from numpy.testing import assert_allclose

from fperiod import DegeneracyError
from fperiod.hilbert import EigenSystem, hs_norm
from fperiod.model import (
    FarModel,
    estimate_far1,
    far1_inverse_filters,
    innovation_cov,
    lag_autocov,
    operator_norm,
    residuals,
    select_a_n,
    transfer_operator,
)
from fperiod.simulate import DgpSpec, GaussianInnovations, gen_far1
from fperiod.spectral import fundamental_frequencies


def far1_series(n, rho, eigenvalues, seed):
    spec = DgpSpec(n=n, rho=rho, innovations=GaussianInnovations(eigenvalues), seed=seed)
    return gen_far1(spec)


class TestLagAutocov:
    def test_constant_series(self):
        x = np.tile([1.0, -2.0], (50, 1))
        assert_allclose(lag_autocov(x, 0), 0.0)
        assert_allclose(lag_autocov(x, 1), 0.0)

    def test_iid_large_sample(self):
        rng = np.random.default_rng(40)
        x = rng.standard_normal((100_000, 2))
        assert np.abs(lag_autocov(x, 0) - np.eye(2)).max() < 0.02
        assert np.abs(lag_autocov(x, 1)).max() < 0.02

    def test_c0_is_psd(self):
        rng = np.random.default_rng(41)
        x = rng.standard_normal((40, 5))
        vals = np.linalg.eigvalsh(lag_autocov(x, 0))
        assert vals.min() >= -1e-10

    def test_too_short(self):
        with pytest.raises(ValueError):
            lag_autocov(np.ones((2, 2)), 1)


class TestEstimateFar1:
    def test_iid_data_gives_small_operator(self):
        rng = np.random.default_rng(42)
        x = rng.standard_normal((5000, 3))
        model = estimate_far1(x)
        assert hs_norm(model.rho_hat) < 0.1

    def test_iid_operator_shrinks_with_sample_size(self):
        sizes = {200: [], 2000: []}
        for seed in range(10):
            rng = np.random.default_rng(1000 + seed)
            draws = rng.standard_normal((2000, 3))
            for n in sizes:
                sizes[n].append(hs_norm(estimate_far1(draws[:n]).rho_hat))
        assert np.mean(sizes[2000]) < np.mean(sizes[200])

    def test_recovers_diagonal_operator(self):
        rho = 0.5 * np.eye(3)
        x = far1_series(5000, rho, (1.0, 0.6, 0.36), seed=43)
        model = estimate_far1(x, fixed_k=3)
        assert hs_norm(model.rho_hat - rho) < 0.15

    def test_full_rank_matches_dense_solve(self):
        rng = np.random.default_rng(44)
        x = rng.standard_normal((400, 4)) @ np.diag([2.0, 1.5, 1.0, 0.5])
        model = estimate_far1(x, fixed_k=4)
        dense = lag_autocov(x, 1) @ np.linalg.inv(lag_autocov(x, 0))
        assert np.abs(model.rho_hat - dense).max() < 1e-8

    def test_scale_equivariant(self):
        x = far1_series(600, 0.4 * np.eye(2), (1.0, 0.5), seed=45)
        base = estimate_far1(x).rho_hat
        for c in (0.1, 10.0):
            scaled = estimate_far1(c * x).rho_hat
            assert np.abs(scaled - base).max() < 1e-10

    def test_component_rule_tracks_threshold(self):
        x = far1_series(2000, 0.3 * np.eye(4), (8.0, 1.0, 0.1, 0.01), seed=46)
        loose = estimate_far1(x, variance_threshold=0.85)
        tight = estimate_far1(x, variance_threshold=0.999)
        assert loose.k_used <= tight.k_used
        assert loose.explained_variance >= 0.85
        assert tight.explained_variance >= 0.999

    def test_large_norm_estimate_flagged_not_rejected(self):
        # stationary operator (spectral radius 0.5) whose operator norm exceeds 1;
        # the estimate inherits the large norm and must be flagged, not refused
        rho = np.array([[0.5, 1.2], [0.0, 0.5]])
        with pytest.warns(UserWarning):
            x = far1_series(2000, rho, (1.0, 0.5), seed=47)
        model = estimate_far1(x, fixed_k=2)
        assert operator_norm(model.rho_hat) >= 1.0
        assert model.warnings and "norm" in model.warnings[0]

    def test_constant_series_degenerate(self):
        with pytest.raises(DegeneracyError):
            estimate_far1(np.ones((100, 2)))


class TestResiduals:
    def test_zero_operator_shifts_centered_series(self):
        rng = np.random.default_rng(48)
        x = rng.standard_normal((30, 2)) + np.array([3.0, -1.0])
        zero_model = FarModel(
            rho_hat=np.zeros((2, 2)), k_used=0, mean=x.mean(axis=0), explained_variance=0.0
        )
        res = residuals(x, zero_model)
        assert_allclose(res, (x - x.mean(axis=0))[1:])

    def test_exact_model_zero_residuals(self):
        rho = np.array([[0.5, 0.1], [0.0, 0.3]])
        x = np.empty((40, 2))
        x[0] = [1.0, -2.0]
        for t in range(1, 40):
            x[t] = rho @ x[t - 1]
        model = FarModel(rho_hat=rho, k_used=2, mean=np.zeros(2), explained_variance=1.0)
        assert np.abs(residuals(x, model)).max() < 1e-12

    def test_whiteness_after_estimation(self):
        x = far1_series(5000, 0.5 * np.eye(2), (1.0, 0.5), seed=50)
        res = residuals(x, estimate_far1(x, fixed_k=2))
        assert hs_norm(lag_autocov(res, 1)) < 0.05


class TestInnovationCov:
    def test_repeated_residual_rank_one(self):
        v = np.array([2.0, 1.0])
        res = np.tile(v, (25, 1))
        cov = innovation_cov(res)
        assert cov.eigen.values[0] == pytest.approx(float(v @ v))
        assert np.abs(cov.eigen.values[1:]).max() < 1e-12

    def test_recovers_diagonal_covariance(self):
        rng = np.random.default_rng(51)
        res = rng.standard_normal((100_000, 2)) * np.sqrt([2.0, 1.0])
        cov = innovation_cov(res)
        assert np.abs(cov.eigen.values - np.array([2.0, 1.0])).max() < 0.05

    def test_trace_equals_mean_squared_norm(self):
        rng = np.random.default_rng(52)
        res = rng.standard_normal((300, 4))
        cov = innovation_cov(res)
        assert np.trace(cov.sigma_hat) == pytest.approx((res**2).sum(1).mean(), abs=1e-10)

    def test_no_recentering(self):
        res = np.tile([1.0, 0.0], (20, 1))  # pure mean, zero variance about it
        cov = innovation_cov(res)
        assert cov.eigen.values[0] == pytest.approx(1.0)


class TestSelectAn:
    @staticmethod
    def _eigen(values):
        vals = np.asarray(values, dtype=float)
        return EigenSystem(values=vals, vectors=np.eye(len(vals)))

    def test_gap_rule(self):
        # -log(1 - 0.009) ~ 0.00904 <= 0.01 first satisfied at j=3
        assert select_a_n(self._eigen([1.0, 0.5, 0.009, 0.001])) == 3

    def test_zero_eigenvalue_passes_immediately(self):
        assert select_a_n(self._eigen([1.0, 0.0])) == 2

    def test_single_eigenvalue_capped(self):
        assert select_a_n(self._eigen([1.0])) == 1

    def test_monotone_in_threshold(self):
        eig = self._eigen([1.0, 0.7, 0.2, 0.05, 0.001])
        previous = None
        for thr in (0.001, 0.01, 0.1, 0.5, 1.0):
            a_n = select_a_n(eig, thr)
            if previous is not None:
                assert a_n <= previous
            previous = a_n

    def test_degenerate_leading_eigenvalue(self):
        with pytest.raises(DegeneracyError):
            select_a_n(self._eigen([0.0, 0.0]))


class TestTransferOperator:
    def test_identity_at_lag_zero(self):
        for omega in (0.1, 1.0, 3.0):
            assert_allclose(transfer_operator([(0, np.eye(2))], omega), np.eye(2))

    def test_zero_coefficients(self):
        assert_allclose(transfer_operator([(0, np.zeros((2, 2))), (3, np.zeros((2, 2)))], 0.7), 0.0)

    def test_neumann_series_inverts_far1_filter(self):
        rho = 0.5 * np.eye(2)
        omega = 1.3
        series = transfer_operator([(k, np.linalg.matrix_power(rho, k)) for k in range(51)], omega)
        inverse = np.eye(2) - np.exp(-1j * omega) * rho
        assert np.abs(series @ inverse - np.eye(2)).max() < 1e-12


class TestFar1InverseFilters:
    def test_zero_operator_gives_identity(self):
        grid = fundamental_frequencies(20)
        filters = far1_inverse_filters(np.zeros((3, 3)), grid)
        assert_allclose(filters, np.broadcast_to(np.eye(3), (grid.q, 3, 3)))

    def test_half_identity_at_quarter_frequency(self):
        grid = fundamental_frequencies(8)  # omega_2 = pi/2
        filters = far1_inverse_filters(0.5 * np.eye(2), grid)
        assert_allclose(filters[1], np.eye(2) * (1.0 + 0.5j), atol=1e-14)

    def test_composes_with_neumann_inverse(self):
        rho = np.array([[0.4, 0.2], [0.0, 0.3]])
        grid = fundamental_frequencies(12)
        filters = far1_inverse_filters(rho, grid)
        for j, omega in enumerate(grid.omegas):
            series = transfer_operator(
                [(k, np.linalg.matrix_power(rho, k)) for k in range(80)], omega
            )
            assert np.abs(filters[j] @ series - np.eye(2)).max() < 1e-10

    def test_unstable_operator_warns(self):
        grid = fundamental_frequencies(10)
        with pytest.warns(UserWarning, match="norm >= 1"):
            far1_inverse_filters(1.2 * np.eye(2), grid)
        assert operator_norm(1.2 * np.eye(2)) == pytest.approx(1.2)
