import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ossolve.errors import DomainError
from ossolve.meanflow import FlowConfig, Linear, Quadratic, Sech2
from ossolve.shortwave import (
    Eigenpair,
    FactorizedSystem,
    dispersion_linear,
    dispersion_quadratic,
    exact_airy_eigenvalue,
    frequency_from_lambda,
    linear_closed_form,
    linear_quantization,
    linear_steady_modulus,
    linear_turning_integral,
    quadratic_closed_form,
    quadratic_quantization,
    quadratic_steady_modulus,
    quadratic_turning_integral,
    spectral_parameter,
    steady_eigen,
    steady_eigen_linear,
    steady_eigen_quadratic,
    wake_decays,
    wake_dispersion,
    wake_eigenpair,
    wake_lambda_exact,
    wkb_airy_eigenvalue,
    wkb_quantization,
)

CFG = FlowConfig(r=20.0, chi=2.0)

complexes = st.complex_numbers(min_magnitude=0.05, max_magnitude=50, allow_nan=False, allow_infinity=False)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestSpectralParameter:
    @given(complexes, complexes, st.floats(0.1, 100))
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, k, omega, chi):
        lam = spectral_parameter(k, omega, chi)
        assert rel(frequency_from_lambda(k, lam, chi), omega) < 1e-9 or abs(frequency_from_lambda(k, lam, chi) - omega) < 1e-9 * (abs(k) ** 2 / chi + abs(lam * k))

    def test_zero_k(self):
        with pytest.raises(DomainError):
            spectral_parameter(0, 1, 1)

    def test_pair_mismatch(self):
        p = Eigenpair.from_k_omega(1, 1 + 1j, 0.3, CFG)
        assert p.lambda_mismatch(CFG) < 1e-15


class TestFactorization:
    @given(complexes, complexes, st.floats(0, 10))
    @settings(max_examples=100, deadline=None)
    def test_sum_of_factors(self, k, omega, y):
        sys_ = FactorizedSystem(CFG, Linear(1.0, 0.3), k, omega)
        assert sys_.sum_check(np.array([y])) < 1e-10

    def test_q_forms_agree(self):
        sys_ = FactorizedSystem(CFG, Quadratic(1.0, 0.5), 0.7 - 0.2j, 0.1 + 0.4j)
        y = np.linspace(0, 5, 11)
        ref = sys_.Q_direct(y)
        assert np.max(np.abs(sys_.Q(y) - ref) / np.abs(ref)) < 1e-12


class TestWKBAiry:
    def test_relative_error_below_one_percent_and_decreasing(self):
        errs = []
        for n in range(5, 13):
            e = abs(wkb_airy_eigenvalue(n, 0.05) - exact_airy_eigenvalue(n, 0.05)) / exact_airy_eigenvalue(n, 0.05)
            errs.append(e)
        assert max(errs) < 0.01
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_harmonic_quantization(self):
        E = 4 * (3 - 0.25) / 20
        res, n = wkb_quantization(E, lambda y: y * y, (0.0, math.sqrt(E)), 20)
        assert n == 3 and abs(res) < 1e-12

    def test_quantization_needs_large_r(self):
        with pytest.raises(DomainError):
            wkb_quantization(1.0, lambda y: y, (0.0, 1.0), 0.5)


class TestSteadyLinear:
    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_residual_and_modulus(self, n):
        p = steady_eigen_linear(n, 1.0, 0.0, CFG)
        assert p.residual <= 1e-12
        assert rel(abs(p.k), linear_steady_modulus(n, CFG)) <= 1e-10
        assert p.omega == 0

    def test_branch_factor_logged(self):
        p = steady_eigen_linear(5, 1.0, 0.0, CFG)
        assert "ratio_to_closed_form" in p.branch_note
        ratio = p.k / linear_closed_form(5, CFG)
        assert abs(abs(ratio) - 1) < 1e-10

    def test_quantization_integral(self):
        p = steady_eigen_linear(4, 1.0, 0.0, CFG)
        action, target = linear_turning_integral(p, 1.0, 0.0, CFG)
        assert rel(action, target) < 1e-10

    @given(st.integers(1, 8), st.floats(0.5, 3.0), st.floats(0.0, 1.0))
    @settings(max_examples=25, deadline=None)
    def test_shifted_profile_quantization(self, n, b, c):
        p = steady_eigen_linear(n, b, c, CFG)
        assert abs(linear_quantization(p.k, b, c, CFG) - n) < 1e-8

    def test_flat_profile_rejected(self):
        with pytest.raises(DomainError, match="b must be nonzero"):
            steady_eigen_linear(1, 0.0, 0.0, CFG)

    def test_index_rejected(self):
        with pytest.raises(DomainError):
            steady_eigen_linear(0, 1.0, 0.0, CFG)


class TestSteadyQuadratic:
    @pytest.mark.parametrize("n", [1, 2, 4, 7])
    def test_residual_and_modulus(self, n):
        p = steady_eigen_quadratic(n, 1.0, 0.0, 0.0, CFG)
        assert p.residual <= 1e-12
        assert rel(abs(p.k), quadratic_steady_modulus(n, CFG)) <= 1e-10

    def test_branch_ratio_logged(self):
        p = steady_eigen_quadratic(2, 1.0, 0.0, 0.0, CFG)
        ratio = p.k / quadratic_closed_form(2, CFG)
        assert abs(abs(ratio) - 1) < 1e-10
        assert "ratio_to_closed_form" in p.branch_note

    def test_quantization_integral(self):
        p = steady_eigen_quadratic(3, 1.0, 0.0, 0.0, CFG)
        action, target = quadratic_turning_integral(p, 1.0, 0.0, 0.0, CFG)
        assert rel(action, target) < 1e-10
        assert abs(quadratic_quantization(p.k, 1.0, 0.0, 0.0, CFG) - 3) < 1e-8

    def test_dispatch(self):
        assert steady_eigen(2, Quadratic(1.0), CFG).k == steady_eigen_quadratic(2, 1.0, 0.0, 0.0, CFG).k
        with pytest.raises(DomainError):
            steady_eigen(1, Sech2(1.0, 1.0), CFG)

    def test_rejects_nonconvex(self):
        with pytest.raises(DomainError):
            steady_eigen_quadratic(1, -1.0, 0.0, 0.0, CFG)


class TestDispersion:
    @given(st.floats(0.05, 5), st.integers(1, 6))
    @settings(max_examples=40, deadline=None)
    def test_linear_finite(self, k, n):
        assert cmath.isfinite(dispersion_linear(n, k, 1.0, 0.0, CFG))

    def test_linear_zero_index_warns(self):
        with pytest.warns(UserWarning):
            dispersion_linear(0, 1.0, 1.0, 0.0, CFG)

    def test_quadratic_rejects(self):
        with pytest.raises(DomainError):
            dispersion_quadratic(1, 1.0, 0.0, 0.0, 0.0, CFG)

    def test_wake_exact_lambda_consistent(self):
        p = wake_eigenpair(2, 1.0, 1.0, 1.0, CFG)
        assert rel(p.lambda_, wake_lambda_exact(2, 1.0, 1.0, 1.0, CFG)) < 1e-14
        assert p.lambda_mismatch(CFG) < 1e-12

    def test_wake_reference_form(self):
        omega, vartheta = wake_dispersion(1, 0.5, 1.0, 1.0, CFG)
        p = wake_eigenpair(1, 0.5, 1.0, 1.0, CFG, exact=False)
        assert p.omega == omega

    def test_wake_decay_flag(self):
        assert wake_decays(2, 1.0, 1.0, 1.0, CFG)
        assert not wake_decays(2, 0.01, 1.0, 1.0, CFG)
